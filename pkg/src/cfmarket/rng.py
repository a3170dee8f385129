"""Seeded, stream-addressable noise source.

Every simulation run owns one stream.  Streams derived from the same seed
with distinct ids are statistically independent (SeedSequence spawn keys),
and the same (seed, stream) pair always reproduces the identical deviate
sequence bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class NoiseSource:
    seed: int
    stream: int = 0
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = make_rng(self.seed, self.stream)

    def normals(self, n: int) -> np.ndarray:
        return self._rng.standard_normal(n)

    def uniforms(self, n: int) -> np.ndarray:
        return self._rng.random(n)

    @property
    def generator(self) -> np.random.Generator:
        return self._rng


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(ss))
