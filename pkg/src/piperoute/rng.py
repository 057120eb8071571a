"""SplitMix64 pseudo-random generator.

Instance generation must reproduce byte-identical files for a given seed on
any platform and any Python version, so we use a fixed, fully specified
64-bit algorithm (SplitMix64) instead of library generators whose sampling
helpers may change between releases.  Bounded draws use rejection sampling,
which keeps them exactly uniform.
"""

from __future__ import annotations

from typing import List, MutableSequence

_MASK = (1 << 64) - 1


def mix64(v: int) -> int:
    """One SplitMix64 output for state v; also used as a seed/stream mixer."""
    v = (v + 0x9E3779B97F4A7C15) & _MASK
    z = v
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = ((1 << 64) // n) * n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def shuffle_prefix(self, items: MutableSequence, k: int) -> None:
        """Fisher-Yates the first k positions of items (draws from the whole tail)."""
        n = len(items)
        k = min(k, n)
        for i in range(k):
            j = i + self.below(n - i)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: List, k: int) -> List:
        pool = list(items)
        self.shuffle_prefix(pool, k)
        return pool[:k]
