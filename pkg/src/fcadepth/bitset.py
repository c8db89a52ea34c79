"""Fixed-universe bitsets for object and attribute subsets.

Both classes wrap a plain ``int`` mask; bit ``i`` set means element ``i`` is
in the set.  Operations between sets of different universes raise
:class:`~fcadepth.errors.DimensionError`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionError


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask`` including ``mask`` and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class _Bits:
    bits: int
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if self.bits < 0 or self.bits >> self.size:
            raise DimensionError(f"bits {self.bits:#x} outside universe of size {self.size}")

    @classmethod
    def of(cls, size: int, indices: Iterable[int] = ()):
        indices = list(indices)
        for i in indices:
            if not 0 <= i < size:
                raise DimensionError(f"index {i} outside universe of size {size}")
        return cls(mask_of(indices), size)

    @classmethod
    def empty(cls, size: int):
        return cls(0, size)

    @classmethod
    def full(cls, size: int):
        return cls((1 << size) - 1, size)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.size != self.size:
            raise DimensionError(f"universe sizes differ: {self.size} vs {other.size}")

    def __iter__(self):
        return iter_bits(self.bits)

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, i):
        return 0 <= i < self.size and bool(self.bits >> i & 1)

    def __and__(self, other):
        self._check(other)
        return type(self)(self.bits & other.bits, self.size)

    def __or__(self, other):
        self._check(other)
        return type(self)(self.bits | other.bits, self.size)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.bits & ~other.bits, self.size)

    def __le__(self, other):
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def complement(self):
        return type(self)(((1 << self.size) - 1) & ~self.bits, self.size)

    def indices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def sort_key(self):
        """Cardinality first, then the sorted index tuple lexicographically."""
        idx = self.indices()
        return (len(idx), idx)

    def __repr__(self):
        return f"{type(self).__name__}({set(self.indices()) or '{}'}, size={self.size})"


class ObjectSet(_Bits):
    """Subset of the object universe of one context."""


class AttributeSet(_Bits):
    """Subset of the attribute universe of one context."""
