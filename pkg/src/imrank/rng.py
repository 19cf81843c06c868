"""Counter-based deterministic random numbers.

Everything stochastic in this package (trivalency probability draws,
cascade coin flips, random permutations) is derived from the splitmix64
finalizer, so any value is a pure function of a 64-bit key.  Re-runs,
parallel schedules and different platforms all reproduce the same streams.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV_2POW53 = 1.0 / (1 << 53)


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit hash with good avalanche."""
    z = (x + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorized mix64 over a uint64 array (wrapping arithmetic)."""
    z = (x + np.uint64(_GAMMA)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def derive_key(base_seed: int, index: int) -> int:
    """Key for stream `index` under `base_seed`; pure function of both."""
    return mix64((base_seed & _MASK) ^ mix64(index & _MASK))


def unit_float(bits: int) -> float:
    """Map 64 random bits to a float in [0, 1) using the top 53 bits."""
    return (bits >> 11) * _INV_2POW53


class SplitMix64:
    """Sequential stream over the splitmix64 counter."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = ((self._state ^ (self._state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return unit_float(self.next_uint64())

    def randrange(self, bound: int) -> int:
        """Uniform integer in [0, bound); 64-bit modulo bias is negligible."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_uint64() % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]
