"""Counter-based SplitMix64 streams.

Output ``k`` (k = 0, 1, ...) of the stream seeded with ``s`` is
``mix(s + (k+1) * GAMMA)`` where, on 64-bit unsigned integers,

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    mix(z) = z ^ (z >> 31)

and ``GAMMA = 0x9E3779B97F4A7C15``.  This is exactly the sequence the
classic stateful SplitMix64 generator produces.  Doubles in ``[0, 1)`` are
``(u64 >> 11) * 2**-53``.  Trial ``i`` of a run uses the stream seeded with
``mix(base + (i+1) * GAMMA)``, so every trial is reproducible on its own,
independent of how trials are scheduled.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["GAMMA", "MASK64", "mix64", "SplitMix64", "derive_seed", "trial_seeds", "uniform_block"]

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * _M1
    z = z ^ (z >> np.uint64(27))
    z = z * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Stateful scalar view of the stream; mostly for tests and docs."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV53


def derive_seed(seed: int, *labels) -> int:
    """Stable 64-bit seed for a labelled sub-run (case id, dimension, ...)."""
    z = seed & MASK64
    for label in labels:
        tag = zlib.crc32(str(label).encode("utf-8"))
        z = mix64((z ^ tag) + GAMMA)
    return z


def trial_seeds(base: int, start: int, count: int) -> np.ndarray:
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix_array(np.uint64(base & MASK64) + idx * np.uint64(GAMMA))


def uniform_block(seeds, count: int) -> np.ndarray:
    """First ``count`` uniforms of each stream in ``seeds``; shape (len(seeds), count)."""
    seeds = np.asarray(seeds, dtype=np.uint64).reshape(-1, 1)
    k = np.arange(1, count + 1, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        z = _mix_array(seeds + k * np.uint64(GAMMA))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53
