"""Seeded random streams.

Stream ``i`` of a run with seed ``s`` is a PCG64 generator seeded with
``splitmix64(s ^ i)``, so every trial or restart can be replayed on its own.
"""
from __future__ import annotations

import secrets

import numpy as np

GENERATOR_ID = "numpy-pcg64/splitmix64(seed^index)"
MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, index: int) -> int:
    return splitmix64((seed ^ index) & MASK64)


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, index)))


def fresh_seed() -> int:
    return secrets.randbits(63)
