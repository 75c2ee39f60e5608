"""Seeded, stream-addressable random sources.

A :class:`RandomSource` is a (seed, stream) pair.  Children derived with
:meth:`RandomSource.child` get their own stream id, so bootstrap replicates
can be generated in any order (or concurrently) and still reproduce
bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomSource:
    seed: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= self.seed <= _U64 and 0 <= self.stream <= _U64):
            raise ValueError("seed and stream must be 64-bit unsigned integers")

    def generator(self) -> np.random.Generator:
        """A fresh PCG64 generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> "RandomSource":
        """Derive an independent stream from this one and a nonnegative index."""
        ss = np.random.SeedSequence(entropy=[self.seed, self.stream, int(index)])
        stream = int(ss.generate_state(1, dtype=np.uint64)[0])
        return RandomSource(self.seed, stream)


def as_random_source(rng) -> RandomSource:
    """Accept a RandomSource, an int seed or None (seed 0)."""
    if isinstance(rng, RandomSource):
        return rng
    if rng is None:
        return RandomSource(0)
    return RandomSource(int(rng))
