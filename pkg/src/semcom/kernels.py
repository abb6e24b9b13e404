"""Integer kernels for the bit-flip channel.

The hot path of every Monte-Carlo sweep is "flip random bits of millions of
signed words". Two implementations are provided: a numba-compiled loop and a
pure-numpy fallback, selected at call time (set ``SEMCOM_NUMBA=0`` to force
the numpy path; ``benchmarks/bench_channel.py`` compares the two).

Both paths consume exactly one uniform deviate per word and map it to a flip
mask through the inverse CDF of the mask distribution, so they produce
identical output for the same generator state — switching backends never
changes results, only speed.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from .errors import DomainError

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def decorate(fn):
            return fn

        return decorate


__all__ = [
    "HAS_NUMBA",
    "numba_enabled",
    "flip_mask_cdf",
    "corrupt_words",
    "error_moments",
]


def numba_enabled() -> bool:
    """True when the compiled path is available and not disabled by env flag."""
    flag = os.environ.get("SEMCOM_NUMBA", "1").strip().lower()
    return HAS_NUMBA and flag not in {"0", "false", "off", "no"}


@lru_cache(maxsize=64)
def flip_mask_cdf(n_bits: int, p_bit: float) -> np.ndarray:
    """Cumulative distribution over all 2^n flip masks (index == mask value).

    A mask with k set bits has probability p^k·(1-p)^(n-k). The cumulative
    array lets a single uniform draw select a mask by binary search, which is
    what keeps the numpy and numba channel paths bit-identical.
    """
    if not 2 <= n_bits <= 16:
        raise DomainError(f"word width must be in [2, 16] bits, got {n_bits!r}")
    if not 0.0 <= p_bit <= 0.5:
        raise DomainError(f"bit flip probability must be in [0, 0.5], got {p_bit!r}")
    count = 1 << n_bits
    popcount = np.zeros(count, dtype=np.int64)
    v = np.arange(count, dtype=np.int64)
    while v.any():
        popcount += v & 1
        v >>= 1
    pmf = np.power(p_bit, popcount) * np.power(1.0 - p_bit, n_bits - popcount)
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0  # close the tiny cumsum rounding gap; uniforms are < 1
    cdf.flags.writeable = False
    return cdf


def _masks_for(u: np.ndarray, cdf: np.ndarray) -> np.ndarray:
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _corrupt_numpy(flat: np.ndarray, u: np.ndarray, cdf: np.ndarray, n_bits: int) -> np.ndarray:
    span = 1 << n_bits
    raw = (flat & (span - 1)) ^ _masks_for(u, cdf)
    return np.where(raw >= (span >> 1), raw - span, raw)


@njit(cache=True)
def _corrupt_numba(flat, u, cdf, n_bits):  # pragma: no cover - measured via dispatch tests
    span = 1 << n_bits
    half = span >> 1
    low = span - 1
    out = np.empty_like(flat)
    for i in range(flat.size):
        ui = u[i]
        lo = 0
        hi = cdf.size
        while lo < hi:
            mid = (lo + hi) >> 1
            if cdf[mid] <= ui:
                lo = mid + 1
            else:
                hi = mid
        raw = (flat[i] & low) ^ lo
        out[i] = raw - span if raw >= half else raw
    return out


@njit(cache=True)
def _error_moments_numba(flat, u, cdf, n_bits):  # pragma: no cover - measured via dispatch tests
    span = 1 << n_bits
    half = span >> 1
    low = span - 1
    total = 0.0
    total_sq = 0.0
    for i in range(flat.size):
        ui = u[i]
        lo = 0
        hi = cdf.size
        while lo < hi:
            mid = (lo + hi) >> 1
            if cdf[mid] <= ui:
                lo = mid + 1
            else:
                hi = mid
        raw = (flat[i] & low) ^ lo
        word = raw - span if raw >= half else raw
        delta = float(word - flat[i])
        total += delta
        total_sq += delta * delta
    return total, total_sq


def corrupt_words(
    words: np.ndarray, n_bits: int, p_bit: float, rng: np.random.Generator
) -> np.ndarray:
    """Flip each bit of each signed n-bit word independently with probability p_bit."""
    flat = np.ascontiguousarray(words, dtype=np.int64).ravel()
    if p_bit == 0.0:
        return flat.copy().reshape(np.shape(words))
    cdf = flip_mask_cdf(int(n_bits), float(p_bit))
    u = rng.random(flat.size)
    if numba_enabled():
        received = _corrupt_numba(flat, u, cdf, int(n_bits))
    else:
        received = _corrupt_numpy(flat, u, cdf, int(n_bits))
    return received.reshape(np.shape(words))


def error_moments(
    words: np.ndarray, n_bits: int, p_bit: float, rng: np.random.Generator
) -> tuple[int, float, float]:
    """(count, Σδ, Σδ²) of the word errors for one corrupted batch.

    Streaming form of ``corrupt_words(...) - words`` that never materializes
    the received batch; used by the large variance-law checks.
    """
    flat = np.ascontiguousarray(words, dtype=np.int64).ravel()
    if p_bit == 0.0:
        return flat.size, 0.0, 0.0
    cdf = flip_mask_cdf(int(n_bits), float(p_bit))
    u = rng.random(flat.size)
    if numba_enabled():
        total, total_sq = _error_moments_numba(flat, u, cdf, int(n_bits))
    else:
        delta = (_corrupt_numpy(flat, u, cdf, int(n_bits)) - flat).astype(np.float64)
        total, total_sq = float(delta.sum()), float(np.dot(delta, delta))
    return flat.size, float(total), float(total_sq)
