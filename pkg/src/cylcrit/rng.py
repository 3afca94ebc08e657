"""Seeded 64-bit linear congruential generator.

The recurrence is ``state <- (A * state + C) mod 2**64`` with Knuth's MMIX
constants; ``uniform()`` returns ``(state >> 11) * 2**-53`` after advancing.
It is kept deliberately simple so any implementation reproduces the same
random cases from the same seed.
"""

import numpy as np

A = 6364136223846793005
C = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed=0):
        self.state = int(seed) & MASK

    def next_u64(self):
        self.state = (A * self.state + C) & MASK
        return self.state

    def uniform(self, lo=0.0, hi=1.0):
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u

    def uniforms(self, count, lo=0.0, hi=1.0):
        return np.array([self.uniform(lo, hi) for _ in range(count)])

    def integer(self, lo, hi):
        """Uniform integer in ``[lo, hi]`` (inclusive)."""
        return lo + int(self.uniform() * (hi - lo + 1))

    def choice(self, seq):
        return seq[self.integer(0, len(seq) - 1)]
