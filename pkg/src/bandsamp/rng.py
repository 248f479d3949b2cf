"""Platform-independent seeded random numbers.

All randomness in the package flows through :class:`SplitMix64`, so any
experiment is reproducible bit-for-bit from its seed on every platform and
numpy version. The algorithm is frozen:

* state update: ``state = (state + 0x9E3779B97F4A7C15) mod 2**64``
* output: ``z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31)`` (all mod 2**64)
* the initial state is the seed reduced mod 2**64
* ``below(n)``: rejection sampling, discard outputs ``>= 2**64 - (2**64 mod n)``,
  return ``output mod n``
* ``uniform()``: ``(output >> 11) * 2**-53``, in [0, 1)
* ``normal()``: Box-Muller on two uniforms, ``sqrt(-2 ln(1 - u1)) cos(2 pi u2)``
* ``split(k)``: a new generator whose seed is the output function applied to
  ``((seed ^ 0x5851F42D4C957F2D) + (k + 1) * 0x9E3779B97F4A7C15) mod 2**64``,
  giving an independent stream per task index ``k``
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.state = self.seed

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _mix(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``, unbiased."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(2.0 * math.pi * u2)

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)], dtype=np.float64)

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)], dtype=np.float64)

    def split(self, k: int) -> "SplitMix64":
        z = ((self.seed ^ 0x5851F42D4C957F2D) + GOLDEN * (int(k) + 1)) & MASK64
        return SplitMix64(_mix(z))


def sample_without_replacement(n: int, m: int, rng: SplitMix64) -> np.ndarray:
    """First ``m`` entries of a partial Fisher-Yates shuffle of ``range(n)``.

    Step ``i`` swaps slot ``i`` with slot ``i + rng.below(n - i)``. Only
    touched slots are stored, so memory is O(m).
    """
    if not 0 <= m <= n:
        raise ValueError(f"cannot draw {m} items from {n}")
    swapped: dict[int, int] = {}
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        j = i + rng.below(n - i)
        vi = swapped.get(i, i)
        vj = swapped.get(j, j)
        swapped[j] = vi
        out[i] = vj
    return out
