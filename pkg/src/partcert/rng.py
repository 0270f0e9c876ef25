"""Deterministic randomness.

Every randomized operation in the package takes an explicit integer seed
and draws from a Philox counter-based generator.  Sub-streams (retry
attempts, experiment trials, per-pair coin arrays) are derived through
SeedSequence spawn keys so that parallel or reordered evaluation cannot
change results.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_rng", "sub_rng", "uniform_bigint", "coin_array"]


def make_rng(seed: int) -> np.random.Generator:
    """Philox generator for the given seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def sub_rng(seed: int, *path: int) -> np.random.Generator:
    """Independent sub-stream identified by (seed, path).

    Identical (seed, path) always yields an identical stream, whatever
    order the sub-streams are consumed in.
    """
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(path)))
    )


def uniform_bigint(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrary-precision bounds.

    Rejection sampling on bound.bit_length() random bits; exact, no float
    involved (needed for draws against Bell numbers).
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    bits = bound.bit_length()
    words = (bits + 31) // 32
    excess = 32 * words - bits
    while True:
        raw = 0
        for w in rng.integers(0, 2**32, size=words, dtype=np.uint64):
            raw = (raw << 32) | int(w)
        raw >>= excess
        if raw < bound:
            return raw


def coin_array(seed: int, count: int, *path: int) -> np.ndarray:
    """Boolean array of `count` fair coins, indexed positionally.

    Flip i depends only on (seed, path, i): the whole array is generated
    in one shot from the sub-stream, so consumers indexing into it are
    independent of their own iteration order.
    """
    rng = sub_rng(seed, *path)
    return rng.integers(0, 2, size=count, dtype=np.uint8).astype(bool)
