"""Deterministic RNG plumbing.

Every stochastic routine in this package takes an explicit
``numpy.random.Generator``. Independent substreams are derived from a master
seed plus an integer path (e.g. ``(row, series)`` of a sweep cell), so results
are identical regardless of worker count or execution order.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the named substream ``path`` of ``seed``."""
    entropy = [int(seed), *[int(p) for p in path]]
    if any(e < 0 for e in entropy):
        raise ValueError("seed and stream path entries must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(entropy))
