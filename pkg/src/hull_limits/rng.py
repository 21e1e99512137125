"""Seed derivation for independent per-path random streams.

Every path gets its own 64-bit seed, mixed from the master seed and the
path index with the splitmix64 finalizer. Sub-streams inside a path (for
example category draws vs. normal draws) are derived the same way from
the path seed, so results never depend on scheduling or batch sizes.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 step: advance by the golden gamma, then finalize."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for stream ``index`` under ``master_seed``."""
    if master_seed < 0 or index < 0:
        raise ValueError("seeds and stream indices must be nonnegative")
    return splitmix64(splitmix64(master_seed & MASK64) ^ (index & MASK64))


def path_seeds(master_seed: int, paths: int) -> list[int]:
    return [derive_seed(master_seed, i) for i in range(paths)]


def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    # normals come from numpy's ziggurat sampler on PCG64
    return np.random.Generator(np.random.PCG64(derive_seed(seed, stream)))
