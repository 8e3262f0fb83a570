"""
Counter-based random streams.

Every random draw in the project comes from numpy's ``Philox`` bit generator.
A stream is fully determined by a 64-bit seed (the low key word) and a
component index (the most significant counter word), so component streams
never overlap and results do not depend on evaluation order or thread count.
"""
import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One round of the splitmix64 finalizer on a 64-bit integer"""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed of the ``index``-th child of ``seed`` (paths, configurations, sweep steps)"""
    return splitmix64((seed & MASK64) ^ splitmix64(index & MASK64))


def stream(seed: int, component: int = 0) -> np.random.Generator:
    """Generator for one component of one seeded draw"""
    bit_generator = np.random.Philox(key=seed & MASK64, counter=(component & MASK64) << 192)
    return np.random.Generator(bit_generator)
