"""SplitMix64 generator for cross-platform reproducible level generation.

The algorithm is fully specified by its recurrence, so any implementation
in any language seeded identically produces identical levels. Bounded draws
use rejection sampling to stay unbiased without floating point.
"""
from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = ((1 << 64) // n) * n
        while True:
            r = self.next_u64()
            if r < threshold:
                return r % n

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.randbelow(len(seq))]

    def sample_distinct(self, seq: Sequence[T], k: int) -> list[T]:
        """k distinct elements via partial Fisher-Yates; draw order preserved."""
        if k > len(seq):
            raise ValueError(f"cannot sample {k} from {len(seq)} elements")
        pool: MutableSequence[T] = list(seq)
        for i in range(k):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return list(pool[:k])


def derive_level_seed(master_seed: int, level_number: int) -> int:
    """Per-level stream: master seed XOR level number times the odd constant."""
    return (master_seed ^ ((level_number * GOLDEN_GAMMA) & MASK64)) & MASK64


def derive_attempt_seed(level_seed: int, attempt: int) -> int:
    """Resample stream for one generation attempt; SplitMix64 decorrelates
    sequential seeds, so consecutive attempts are independent streams."""
    return (level_seed + attempt) & MASK64
