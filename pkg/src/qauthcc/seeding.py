"""Seeded, splittable random streams.

Every session and every Monte Carlo trial gets its own
:class:`numpy.random.Generator` derived from a master seed through
:class:`numpy.random.SeedSequence`, so results never depend on execution
order.
"""

from __future__ import annotations

import numpy as np

SeedLike = int | np.random.SeedSequence


def as_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (bool, float)) or int(seed) < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.SeedSequence(int(seed))


def generator(seed: SeedLike) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(as_sequence(seed)))


def split(seed: SeedLike, count: int) -> list[np.random.SeedSequence]:
    """Independent child sequences; child ``i`` depends only on (seed, i).

    Unlike ``SeedSequence.spawn`` this never mutates the parent, so the
    same seed always splits the same way.
    """
    root = as_sequence(seed)
    return [np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (i,)) for i in range(count)]


trial_seeds = split
