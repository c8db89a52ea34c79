"""Generalised Tukey depth, its enumeration oracles, contours and rankings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .bitset import ObjectSet, iter_bits, iter_submasks
from .context import FormalContext, extent_masks
from .errors import DimensionError, FcaDepthError, SizeLimitError, UnknownDepthFunction, ValidationError
from .measure import DiscreteMeasure, Sample

ORACLE_CAP = 20

ObjectRef = Union[int, str]


def fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _index(ctx: FormalContext, g: ObjectRef) -> int:
    if isinstance(g, str):
        return ctx.object_index(g)
    if not 0 <= g < ctx.n_objects:
        raise DimensionError(f"object index {g} outside 0..{ctx.n_objects - 1}")
    return g


def _check_measure(ctx: FormalContext, measure: DiscreteMeasure):
    if measure.size != ctx.n_objects:
        raise DimensionError(f"measure over {measure.size} objects, context has {ctx.n_objects}")


@dataclass(frozen=True)
class DepthMap:
    """Depth value per object, with the ids of the inputs that produced it."""

    values: tuple[Fraction, ...]
    object_labels: tuple[str, ...]
    depth_name: str = ""
    context_id: str = ""
    measure_id: str = ""

    def __post_init__(self):
        if len(self.values) != len(self.object_labels):
            raise DimensionError("one depth value per object required")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __getitem__(self, g: int) -> Fraction:
        return self.values[g]

    def __len__(self):
        return len(self.values)

    def tie_groups(self) -> list[tuple[int, ...]]:
        """Objects grouped by equal depth, deepest group first, indices ascending."""
        levels = sorted(set(self.values), reverse=True)
        return [tuple(g for g, v in enumerate(self.values) if v == a) for a in levels]

    def competition_ranks(self) -> list[int]:
        return [1 + sum(1 for w in self.values if w > v) for v in self.values]

    def rows(self, with_float: bool = False) -> list[dict]:
        group_of = {g: k + 1 for k, grp in enumerate(self.tie_groups()) for g in grp}
        ranks = self.competition_ranks()
        out = []
        for g, v in enumerate(self.values):
            row = {"object": self.object_labels[g], "depth": fmt_fraction(v), "rank": ranks[g],
                   "tie_group": group_of[g]}
            if with_float:
                row["float"] = float(v)
            out.append(row)
        return out

    def to_dict(self, with_float: bool = False) -> dict:
        return {
            "depth_function": self.depth_name,
            "context_id": self.context_id,
            "measure_id": self.measure_id,
            "rows": self.rows(with_float),
        }

    def to_json(self, with_float: bool = False) -> str:
        return json.dumps(self.to_dict(with_float), ensure_ascii=False, indent=2) + "\n"

    def to_tsv(self, with_float: bool = False) -> str:
        header = ["object", "depth", "rank", "tie_group"] + (["float"] if with_float else [])
        lines = ["\t".join(header)]
        for row in self.rows(with_float):
            cells = [row["object"], row["depth"], str(row["rank"]), str(row["tie_group"])]
            if with_float:
                cells.append(repr(row["float"]))
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


# -- generalised Tukey depth ---------------------------------------------------

def _column_masses(ctx: FormalContext, measure: DiscreteMeasure) -> list[int]:
    return [measure.mass_numerator(c) for c in ctx.cols]


def _tukey_numerators(ctx: FormalContext, measure: DiscreteMeasure) -> list[int]:
    """Per object: largest numerator of Pr(Φ(m)) over attributes g lacks (0 if none)."""
    masses = _column_masses(ctx, measure)
    full = ctx.all_attributes
    return [max((masses[m] for m in iter_bits(full & ~row)), default=0) for row in ctx.rows]


def tukey_depth(g: ObjectRef, ctx: FormalContext, measure: DiscreteMeasure) -> Fraction:
    """1 - max over attributes g lacks of the mass of that attribute's extent.

    The max over no attributes is 0, so an object with every attribute has depth 1.
    """
    _check_measure(ctx, measure)
    g = _index(ctx, g)
    masses = _column_masses(ctx, measure)
    lacking = ctx.all_attributes & ~ctx.rows[g]
    top = max((masses[m] for m in iter_bits(lacking)), default=0)
    return 1 - Fraction(top, measure.denominator)


def tukey_depths(ctx: FormalContext, measure: DiscreteMeasure) -> list[Fraction]:
    _check_measure(ctx, measure)
    return [1 - Fraction(t, measure.denominator) for t in _tukey_numerators(ctx, measure)]


def tukey_map(ctx: FormalContext, measure: DiscreteMeasure) -> DepthMap:
    return DepthMap(tuple(tukey_depths(ctx, measure)), ctx.object_labels, "tukey",
                    ctx.fingerprint(), measure.fingerprint())


def empirical_tukey(g: ObjectRef, ctx: FormalContext, sample: Sample) -> Fraction:
    """Tukey depth under the empirical measure of ``sample``.

    Computed by the count formula and checked against the measure-based one.
    """
    if len(sample) == 0:
        raise FcaDepthError("empirical depth needs a non-empty sample")
    if sample.size != ctx.n_objects:
        raise DimensionError("sample drawn from a different object universe")
    g = _index(ctx, g)
    counts = sample.counts()
    lacking = ctx.all_attributes & ~ctx.rows[g]
    top = max((sum(counts[h] for h in iter_bits(ctx.cols[m])) for m in iter_bits(lacking)), default=0)
    closed_form = 1 - Fraction(top, len(sample))
    via_measure = tukey_depth(g, ctx, DiscreteMeasure.from_sample(sample))
    if closed_form != via_measure:
        raise AssertionError(f"empirical Tukey mismatch: {closed_form} vs {via_measure}")
    return closed_form


def tukey_oracle(g: ObjectRef, ctx: FormalContext, measure: DiscreteMeasure, mode: str = "attr_subsets",
                 cap: int = ORACLE_CAP) -> Fraction:
    """Tukey depth by exhaustive enumeration.

    ``attr_subsets``: 1 - max over non-empty B ⊆ M∖Ψ({g}) of Pr(Φ(B)).
    ``extents``: 1 - max over extents A not containing g of Pr(A).
    An empty index set contributes 0.
    """
    _check_measure(ctx, measure)
    g = _index(ctx, g)
    if mode == "attr_subsets":
        if ctx.n_attributes > cap:
            raise SizeLimitError("attribute-subset oracle", ctx.n_attributes, cap)
        lacking = ctx.all_attributes & ~ctx.rows[g]
        best = 0
        for b in iter_submasks(lacking):
            if b:
                best = max(best, measure.mass_numerator(ctx.phi(b)))
    elif mode == "extents":
        if ctx.n_objects > cap:
            raise SizeLimitError("extent oracle", ctx.n_objects, cap)
        best = 0
        for ext in extent_masks(ctx, cap):
            if not ext >> g & 1:
                best = max(best, measure.mass_numerator(ext))
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    return 1 - Fraction(best, measure.denominator)


# -- contours and ranking ------------------------------------------------------

def contour_sets(ctx: FormalContext, measure: Optional[DiscreteMeasure], depth: DepthMap):
    """``[(alpha, {g : depth(g) >= alpha})]`` for every attained alpha, decreasing."""
    if len(depth) != ctx.n_objects:
        raise DimensionError("depth map and context disagree on the number of objects")
    out = []
    for alpha in sorted(set(depth.values), reverse=True):
        mask = sum(1 << g for g, v in enumerate(depth.values) if v >= alpha)
        out.append((alpha, ObjectSet(mask, ctx.n_objects)))
    return out


@dataclass(frozen=True)
class DepthFunctionHandle:
    """A named depth function ``(object index, context, measure) -> value``.

    ``batch`` optionally computes all objects at once.
    """

    name: str
    evaluator: Callable[[int, FormalContext, DiscreteMeasure], Fraction]
    batch: Optional[Callable[[FormalContext, DiscreteMeasure], Sequence[Fraction]]] = field(default=None,
                                                                                          compare=False)

    def __call__(self, g: int, ctx: FormalContext, measure: DiscreteMeasure) -> Fraction:
        return self.evaluator(g, ctx, measure)

    def values(self, ctx: FormalContext, measure: DiscreteMeasure) -> tuple:
        if self.batch is not None:
            return tuple(self.batch(ctx, measure))
        return tuple(self.evaluator(g, ctx, measure) for g in range(ctx.n_objects))

    def depth_map(self, ctx: FormalContext, measure: DiscreteMeasure) -> DepthMap:
        return DepthMap(self.values(ctx, measure), ctx.object_labels, self.name, ctx.fingerprint(),
                        measure.fingerprint())


def fixed_depth(name: str, values: Sequence) -> DepthFunctionHandle:
    """Handle returning preset values regardless of context and measure."""
    vals = tuple(Fraction(v) for v in values)
    return DepthFunctionHandle(name, lambda g, ctx, measure: vals[g], lambda ctx, measure: vals)


# -- strongly free depth on hierarchical contexts ------------------------------

def hierarchy_blocks(ctx: FormalContext) -> list[int]:
    """Top-level categories of a tree-shaped (hierarchical nominal) context.

    The non-empty attribute extents must form a laminar family whose maximal
    members partition the objects; those maximal members are returned.
    """
    cols = sorted({c for c in ctx.cols if c}, key=lambda c: -c.bit_count())
    for i, a in enumerate(cols):
        for b in cols[i + 1:]:
            inter = a & b
            if inter and inter != b:
                raise ValidationError("not a hierarchical context: attribute extents overlap without nesting")
    blocks = []
    for c in cols:
        if not any(c & b for b in blocks):
            blocks.append(c)
    if sum(blocks) != ctx.all_objects:
        raise ValidationError("not a hierarchical context: top-level categories do not cover every object")
    return blocks


def hierarchical_free_values(ctx: FormalContext, measure: DiscreteMeasure) -> tuple[Fraction, ...]:
    _check_measure(ctx, measure)
    blocks = hierarchy_blocks(ctx)
    top = max(measure.weights)
    star = measure.weights.index(top)
    block = next(b for b in blocks if b >> star & 1)
    return tuple(
        Fraction(1) if g == star else Fraction(1, 2) if block >> g & 1 else Fraction(0)
        for g in range(ctx.n_objects)
    )


def hierarchical_free_depth(ctx: FormalContext, measure: DiscreteMeasure) -> DepthMap:
    """1 for the heaviest object (lowest index on ties), 1/2 for the rest of its
    top-level category, 0 elsewhere."""
    return DepthMap(hierarchical_free_values(ctx, measure), ctx.object_labels, "hier-free",
                    ctx.fingerprint(), measure.fingerprint())


TUKEY = DepthFunctionHandle("tukey", lambda g, ctx, measure: tukey_depth(g, ctx, measure), tukey_depths)
HIER_FREE = DepthFunctionHandle(
    "hier-free", lambda g, ctx, measure: hierarchical_free_values(ctx, measure)[g], hierarchical_free_values
)

DEPTH_FUNCTIONS = {TUKEY.name: TUKEY, HIER_FREE.name: HIER_FREE}


def get_depth_function(name: str) -> DepthFunctionHandle:
    try:
        return DEPTH_FUNCTIONS[name]
    except KeyError:
        raise UnknownDepthFunction(name) from None


def rank(ctx: FormalContext, measure: DiscreteMeasure, depth_fn_name: str = "tukey") -> list[tuple[int, ...]]:
    """Objects in descending depth, grouped by ties (ascending index within a group)."""
    return get_depth_function(depth_fn_name).depth_map(ctx, measure).tie_groups()
