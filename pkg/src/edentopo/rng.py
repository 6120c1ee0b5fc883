"""Seeded 64-bit random stream shared by every stochastic routine.

The generator is numpy's PCG64 seeded through ``SeedSequence(seed)``; raw
64-bit outputs are consumed in fixed blocks, so a (seed, call sequence)
pair yields the same numbers on every platform numpy supports.
"""
from __future__ import annotations

import math

import numpy as np

RNG_NAME = "numpy.PCG64(SeedSequence(seed)).random_raw/block4096/v1"
_BLOCK = 4096
_TWO64 = 1 << 64
_INV53 = 2.0 ** -53


class RandomStream:
    name = RNG_NAME

    def __init__(self, seed: int):
        if not isinstance(seed, (int, np.integer)) or seed < 0 or seed >= _TWO64:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {seed!r}")
        self.seed = int(seed)
        self._bg = np.random.PCG64(self.seed)
        self._it = iter(())

    def next_u64(self) -> int:
        try:
            return next(self._it)
        except StopIteration:
            self._it = iter(self._bg.random_raw(_BLOCK).tolist())
            return next(self._it)

    def below(self, n: int) -> int:
        """Exactly uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        lim = _TWO64 - _TWO64 % n
        r = self.next_u64()
        while r >= lim:
            r = self.next_u64()
        return r % n

    def uniform(self) -> float:
        """Uniform double in [0, 1) on the 2^-53 grid."""
        return (self.next_u64() >> 11) * _INV53

    def exponential(self, mean: float = 1.0) -> float:
        # inverse CDF; 1-u lies in (0, 1] so the log is finite
        return -mean * math.log1p(-self.uniform())
