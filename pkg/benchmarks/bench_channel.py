#!/usr/bin/env python3
"""Compare the numba and pure-numpy bit-flip channel kernels.

Run:  python3 benchmarks/bench_channel.py [--words 2000000] [--bits 12] [--bep 0.2]

Both backends consume the same uniform stream, so besides timing them this
script asserts they agree word for word.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from semcom.kernels import HAS_NUMBA, _corrupt_numba, _corrupt_numpy, flip_mask_cdf


def _time(fn, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--words", type=int, default=2_000_000)
    parser.add_argument("--bits", type=int, default=12)
    parser.add_argument("--bep", type=float, default=0.2)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    half = 1 << (args.bits - 1)
    words = rng.integers(-half, half, size=args.words, dtype=np.int64)
    u = rng.random(args.words)
    cdf = flip_mask_cdf(args.bits, args.bep)

    got_numpy = _corrupt_numpy(words, u, cdf, args.bits)
    t_numpy = _time(lambda: _corrupt_numpy(words, u, cdf, args.bits))
    print(f"numpy : {t_numpy * 1e3:8.2f} ms  ({args.words / t_numpy / 1e6:7.1f} Mwords/s)")

    if HAS_NUMBA:
        _corrupt_numba(words[:16], u[:16], cdf, args.bits)  # trigger compilation
        got_numba = _corrupt_numba(words, u, cdf, args.bits)
        t_numba = _time(lambda: _corrupt_numba(words, u, cdf, args.bits))
        print(f"numba : {t_numba * 1e3:8.2f} ms  ({args.words / t_numba / 1e6:7.1f} Mwords/s)")
        print(f"speedup: {t_numpy / t_numba:.2f}x")
        assert np.array_equal(got_numpy, got_numba), "backends disagree"
        print("backends agree word for word")
    else:
        print("numba : not installed; only the numpy path was measured")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
