"""Reproducible random streams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream keyed by ``(seed, stream, *path)``.

    Backed by Philox, so a given key yields the same draws on every
    platform, and streams for different keys never overlap in practice.
    """

    seed: int
    stream: int = 0
    path: tuple[int, ...] = ()

    def child(self, index: int) -> RngStream:
        return RngStream(self.seed, self.stream, self.path + (int(index),))

    def generator(self) -> np.random.Generator:
        key = [int(self.seed) & 0xFFFFFFFFFFFFFFFF, int(self.stream) & 0xFFFFFFFFFFFFFFFF, *self.path]
        return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))
