"""Exact discrete probability measures over the objects of a context."""
from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bitset import ObjectSet, iter_bits
from .context import FormalContext
from .errors import DimensionError, FcaDepthError, IngestionError


def to_fraction(value) -> Fraction:
    """Rational from int, Fraction, ``"p/q"``/decimal string, or float (via its repr)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weights per object; exact rationals summing to one.

    Internally the weights are kept as integer numerators over a common
    denominator so set masses are integer sums.
    """

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        if any(w < 0 for w in ws):
            raise FcaDepthError("negative weight")
        if sum(ws) != 1:
            raise FcaDepthError(f"weights sum to {sum(ws)}, not 1")
        den = math.lcm(*(w.denominator for w in ws)) if ws else 1
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "denominator", den)
        object.__setattr__(self, "numerators", tuple(w.numerator * (den // w.denominator) for w in ws))

    @property
    def size(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, n: int) -> "DiscreteMeasure":
        if n < 1:
            raise FcaDepthError("uniform measure needs at least one object")
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def from_weights(cls, weights: Iterable) -> "DiscreteMeasure":
        """Normalise non-negative rational weights."""
        ws = [to_fraction(w) for w in weights]
        if any(w < 0 for w in ws):
            raise FcaDepthError("negative weight")
        total = sum(ws)
        if total == 0:
            raise FcaDepthError("weights sum to 0")
        return cls(tuple(w / total for w in ws))

    @classmethod
    def from_sample(cls, sample: "Sample") -> "DiscreteMeasure":
        counts = sample.counts()
        n = len(sample)
        return cls(tuple(Fraction(c, n) for c in counts))

    def mass_numerator(self, mask: int) -> int:
        nums = self.numerators
        return sum(nums[g] for g in iter_bits(mask))

    def mass(self, mask: int) -> Fraction:
        return Fraction(self.mass_numerator(mask), self.denominator)

    def support(self) -> int:
        return sum(1 << g for g, w in enumerate(self.weights) if w)

    def fingerprint(self) -> str:
        payload = ",".join(f"{w.numerator}/{w.denominator}" for w in self.weights)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]

    def floats(self) -> list[float]:
        return [float(w) for w in self.weights]


@dataclass(frozen=True)
class Sample:
    """Multiset of object indices drawn from a context with ``size`` objects."""

    indices: tuple[int, ...]
    size: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        for i in self.indices:
            if not 0 <= i < self.size:
                raise DimensionError(f"sample index {i} outside 0..{self.size - 1}")

    @classmethod
    def from_labels(cls, ctx: FormalContext, labels: Sequence[str]) -> "Sample":
        try:
            return cls(tuple(ctx.object_index(x) for x in labels), ctx.n_objects)
        except KeyError as exc:
            raise IngestionError(str(exc.args[0])) from None

    def __len__(self):
        return len(self.indices)

    def counts(self) -> list[int]:
        c = Counter(self.indices)
        return [c.get(g, 0) for g in range(self.size)]

    def without_position(self, pos: int) -> "Sample":
        return Sample(self.indices[:pos] + self.indices[pos + 1:], self.size)


def make_measure(kind: str, ctx: FormalContext, sample: Sample = None, weights=None) -> DiscreteMeasure:
    """``kind`` is ``uniform``, ``empirical`` (needs ``sample``) or ``explicit`` (needs ``weights``)."""
    if kind == "uniform":
        return DiscreteMeasure.uniform(ctx.n_objects)
    if kind == "empirical":
        if sample is None or len(sample) == 0:
            raise FcaDepthError("empirical measure needs a non-empty sample")
        if sample.size != ctx.n_objects:
            raise DimensionError("sample drawn from a different object universe")
        return DiscreteMeasure.from_sample(sample)
    if kind == "explicit":
        if weights is None:
            raise FcaDepthError("explicit measure needs weights")
        weights = list(weights)
        if len(weights) != ctx.n_objects:
            raise DimensionError(f"{len(weights)} weights for {ctx.n_objects} objects")
        return DiscreteMeasure.from_weights(weights)
    raise ValueError(f"unknown measure kind {kind!r}")


def measure_of(measure: DiscreteMeasure, A: ObjectSet) -> Fraction:
    if A.size != measure.size:
        raise DimensionError(f"object set of size {A.size} measured on {measure.size} objects")
    return measure.mass(A.bits)


def total_variation(p: DiscreteMeasure, q: DiscreteMeasure) -> Fraction:
    """sup over events |p(A) - q(A)|; on a finite set, half the L1 distance."""
    if p.size != q.size:
        raise DimensionError("measures over different universes")
    return sum((abs(a - b) for a, b in zip(p.weights, q.weights)), Fraction(0)) / 2


def measure_family_diameter(measures: Sequence[DiscreteMeasure]) -> Fraction:
    """Largest pairwise total-variation distance in a finite family."""
    best = Fraction(0)
    for i, p in enumerate(measures):
        for q in measures[i + 1:]:
            best = max(best, total_variation(p, q))
    return best
