"""Deterministic seed derivation.

Every random stream in the package is derived from a user seed plus a
namespaced key path, so concurrent execution order can never change
results. Derivation goes through ``numpy.random.SeedSequence`` whose
hashing is stable across platforms and numpy versions.
"""
import numpy as np

# namespace keys for spawn paths
SPLIT = 1
MODEL = 2
CURVE = 3
TREE = 4
PARTITION = 5
SAMPLER = 6
NET = 7


def seed_sequence(seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=tuple(int(p) for p in path))


def generator(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *path)))


def derive_int(seed: int, *path: int) -> int:
    """A single derived 63-bit integer seed (for components that take ints)."""
    state = seed_sequence(seed, *path).generate_state(1, dtype=np.uint64)[0]
    return int(state >> np.uint64(1))
