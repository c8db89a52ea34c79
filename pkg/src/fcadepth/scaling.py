"""Conceptual scaling: raw tables, partial orders and point clouds to contexts.

Every builder returns a :class:`~fcadepth.context.FormalContext` whose
attribute labels record where each attribute came from, e.g. ``age≤35``,
``sex=f``, ``1≺2`` or ``⟨(1,0),·⟩≥2``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .bitset import mask_of
from .context import FormalContext
from .errors import DimensionError, IngestionError, ScaleTypeError, ValidationError

LE, GE = "≤", "≥"
PATH_SEPARATOR = "/"


def to_number(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numeric observations")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a number: {value!r}")


def format_number(x: Fraction) -> str:
    """Shortest exact decimal for ``x``; ``p/q`` when the decimal does not terminate."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x.numerator) * 10 ** digits // x.denominator
    sign = "-" if x < 0 else ""
    text = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}".rstrip("0").rstrip(".")


# -- tables -----------------------------------------------------------------

CATEGORICAL, NUMERIC, HIERARCHICAL = "categorical", "numeric", "hierarchical"


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in (CATEGORICAL, NUMERIC, HIERARCHICAL):
            raise ValidationError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == HIERARCHICAL:
            for r, path in enumerate(self.values):
                if not isinstance(path, tuple) or not path or not all(path):
                    raise ValidationError(
                        f"column {self.name!r}: hierarchical values must be non-empty label paths (row {r + 1})"
                    )


@dataclass(frozen=True)
class DataTable:
    row_labels: tuple[str, ...]
    columns: tuple[Column, ...]

    def __post_init__(self):
        for col in self.columns:
            if len(col.values) != len(self.row_labels):
                raise DimensionError(
                    f"column {col.name!r} has {len(col.values)} values for {len(self.row_labels)} rows"
                )
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate column names")

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(name)


@dataclass(frozen=True)
class Nominal:
    categories: Optional[tuple] = None


@dataclass(frozen=True)
class Ordinal:
    thresholds: Optional[tuple] = None
    direction: str = "le"

    def __post_init__(self):
        if self.direction not in ("le", "ge"):
            raise ValidationError(f"ordinal direction must be 'le' or 'ge', not {self.direction!r}")


@dataclass(frozen=True)
class Interordinal:
    thresholds: Optional[tuple] = None


@dataclass(frozen=True)
class Hierarchical:
    separator: str = PATH_SEPARATOR


Directive = Union[Nominal, Ordinal, Interordinal, Hierarchical]


@dataclass(frozen=True)
class ScalingSpec:
    """Column name -> scaling directive."""

    directives: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, d in self.directives.items():
            th = getattr(d, "thresholds", None)
            if th is not None and any(b <= a for a, b in zip(th, th[1:])):
                raise ValidationError(f"thresholds for column {name!r} must be strictly increasing")

    @classmethod
    def from_dict(cls, data: dict) -> "ScalingSpec":
        cols = data.get("columns", data)
        directives = {}
        for name, entry in cols.items():
            if isinstance(entry, str):
                entry = {"scale": entry}
            kind = entry.get("scale")
            th = entry.get("thresholds")
            if th is not None:
                try:
                    th = tuple(to_number(t) for t in th)
                except (TypeError, ValueError):
                    raise IngestionError("non-numeric threshold", column=name) from None
            if kind == "nominal":
                cats = entry.get("categories")
                directives[name] = Nominal(tuple(str(c) for c in cats) if cats is not None else None)
            elif kind == "ordinal":
                directives[name] = Ordinal(th, entry.get("direction", "le"))
            elif kind == "interordinal":
                directives[name] = Interordinal(th)
            elif kind == "hierarchical":
                directives[name] = Hierarchical(entry.get("separator", PATH_SEPARATOR))
            else:
                raise IngestionError(f"unknown scale {kind!r}", column=name)
        return cls(directives)

    @classmethod
    def load(cls, path) -> "ScalingSpec":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _column_kind(d: Directive) -> str:
    if isinstance(d, (Ordinal, Interordinal)):
        return NUMERIC
    if isinstance(d, Hierarchical):
        return HIERARCHICAL
    return CATEGORICAL


def table_from_rows(header: Sequence[str], rows: Sequence[Sequence[str]], spec: ScalingSpec) -> DataTable:
    """Typed table from raw string cells; the first column holds object labels.

    Cell coordinates in errors are 1-based data rows (header excluded).
    """
    if len(header) < 1:
        raise IngestionError("empty header")
    names = list(header[1:])
    labels = []
    cells: list[list] = [[] for _ in names]
    for r, raw in enumerate(rows, start=1):
        if len(raw) != len(header):
            raise IngestionError(f"expected {len(header)} cells, found {len(raw)}", row=r)
        labels.append(raw[0].strip())
        for c, name in enumerate(names):
            cells[c].append(raw[c + 1].strip())
    columns = []
    for c, name in enumerate(names):
        d = spec.directives.get(name)
        if d is None:
            raise IngestionError("no scaling directive", column=name)
        kind = _column_kind(d)
        if kind == NUMERIC:
            vals = []
            for r, v in enumerate(cells[c], start=1):
                try:
                    vals.append(to_number(v))
                except (ValueError, ZeroDivisionError):
                    raise ScaleTypeError(f"non-numeric value {v!r}", row=r, column=name) from None
        elif kind == HIERARCHICAL:
            vals = []
            for r, v in enumerate(cells[c], start=1):
                path = tuple(p.strip() for p in v.split(d.separator))
                if not all(path):
                    raise IngestionError(f"empty category in path {v!r}", row=r, column=name)
                vals.append(path)
        else:
            vals = cells[c]
        columns.append(Column(name, kind, tuple(vals)))
    return DataTable(tuple(labels), tuple(columns))


def infer_spec(header: Sequence[str], rows: Sequence[Sequence[str]]) -> ScalingSpec:
    """Default directives: numeric columns interordinal, columns whose cells
    contain ``/`` hierarchical, everything else nominal."""
    directives = {}
    for c, name in enumerate(header[1:], start=1):
        vals = [r[c].strip() for r in rows if len(r) > c]
        if vals and all(_is_number(v) for v in vals):
            directives[name] = Interordinal()
        elif vals and all(PATH_SEPARATOR in v for v in vals):
            directives[name] = Hierarchical()
        else:
            directives[name] = Nominal()
    return ScalingSpec(directives)


def _is_number(text):
    try:
        to_number(text)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def read_csv(path, spec: Optional[ScalingSpec] = None) -> tuple[DataTable, ScalingSpec]:
    """Read a CSV file (header row; first column = object labels)."""
    text = Path(path).read_text(encoding="utf-8")
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise IngestionError("empty CSV file")
    header, body = rows[0], rows[1:]
    if spec is None:
        spec = infer_spec(header, body)
    return table_from_rows(header, body, spec), spec


def _nominal(col: Column, d: Nominal):
    if d.categories is not None:
        cats = list(d.categories)
        for r, v in enumerate(col.values, start=1):
            if str(v) not in cats:
                raise IngestionError(f"value {v!r} is not a declared category", row=r, column=col.name)
    else:
        cats = list(dict.fromkeys(str(v) for v in col.values))
    labels = [f"{col.name}={c}" for c in cats]
    rows = [mask_of([cats.index(str(v))]) for v in col.values]
    return labels, rows


def _numeric_values(col: Column):
    vals = []
    for r, v in enumerate(col.values, start=1):
        try:
            vals.append(to_number(v))
        except (TypeError, ValueError):
            raise ScaleTypeError(f"non-numeric value {v!r}", row=r, column=col.name) from None
    return vals


def _thresholds(vals, given):
    return list(given) if given is not None else sorted(set(vals))


def _ordinal(col: Column, d: Ordinal):
    vals = _numeric_values(col)
    ts = _thresholds(vals, d.thresholds)
    if d.direction == "le":
        labels = [f"{col.name}{LE}{format_number(t)}" for t in ts]
        rows = [mask_of(k for k, t in enumerate(ts) if v <= t) for v in vals]
    else:
        labels = [f"{col.name}{GE}{format_number(t)}" for t in ts]
        rows = [mask_of(k for k, t in enumerate(ts) if v >= t) for v in vals]
    return labels, rows


def _interordinal(col: Column, d: Interordinal):
    vals = _numeric_values(col)
    ts = _thresholds(vals, d.thresholds)
    k = len(ts)
    labels = [f"{col.name}{LE}{format_number(t)}" for t in ts] + [f"{col.name}{GE}{format_number(t)}" for t in ts]
    rows = [
        mask_of(j for j, t in enumerate(ts) if v <= t) | mask_of(k + j for j, t in enumerate(ts) if v >= t)
        for v in vals
    ]
    return labels, rows


def _hierarchy_nodes(paths, label_of, column=None):
    """Tree nodes (as path prefixes) level by level in first-appearance order.

    A node is identified by its whole prefix, so the same category may sit
    under several parents.  Two different prefixes that would receive the
    same attribute label make the tree ambiguous and are rejected.
    """
    levels: list[dict] = []
    owner: dict[str, tuple] = {}
    for r, path in enumerate(paths, start=1):
        for depth in range(len(path)):
            node = tuple(path[:depth + 1])
            label = label_of(node)
            if owner.setdefault(label, node) != node:
                raise ValidationError(
                    f"node label {label!r} names two different tree nodes "
                    f"({'/'.join(owner[label])} and {'/'.join(node)})"
                    + (f" in column {column!r}" if column else "")
                    + f" (row {r})"
                )
            while len(levels) <= depth:
                levels.append({})
            levels[depth].setdefault(node, None)
    return [node for level in levels for node in level]


def _hierarchical(col: Column, d: Hierarchical):
    paths = list(col.values)
    label_of = lambda n: f"{col.name}={d.separator.join(n)}"
    nodes = _hierarchy_nodes(paths, label_of, col.name)
    labels = [label_of(n) for n in nodes]
    rows = [mask_of(j for j, n in enumerate(nodes) if tuple(p[:len(n)]) == n) for p in paths]
    return labels, rows


def scale_table(table: DataTable, spec: ScalingSpec) -> FormalContext:
    """Scale every column by its directive and appose the results."""
    labels: list[str] = []
    rows = [0] * len(table.row_labels)
    for col in table.columns:
        d = spec.directives.get(col.name)
        if d is None:
            raise IngestionError("no scaling directive", column=col.name)
        if isinstance(d, Nominal):
            if col.kind == HIERARCHICAL:
                raise ScaleTypeError("nominal scaling of a hierarchical column", column=col.name)
            part_labels, part_rows = _nominal(col, d)
        elif isinstance(d, Ordinal):
            part_labels, part_rows = _ordinal(col, d)
        elif isinstance(d, Interordinal):
            part_labels, part_rows = _interordinal(col, d)
        elif isinstance(d, Hierarchical):
            if col.kind != HIERARCHICAL:
                raise ScaleTypeError("hierarchical scaling needs a path column", column=col.name)
            part_labels, part_rows = _hierarchical(col, d)
        else:
            raise TypeError(f"unknown directive {d!r}")
        shift = len(labels)
        labels += part_labels
        rows = [a | b << shift for a, b in zip(rows, part_rows)]
    return FormalContext(table.row_labels, tuple(labels), tuple(rows))


def scale_hierarchical(paths: Sequence[Sequence[str]], labels: Optional[Sequence[str]] = None,
                       separator: str = "") -> FormalContext:
    """One attribute per tree node; an object has a node iff the node is a
    prefix of its path.  Node labels join the prefix with ``separator``."""
    paths = [tuple(p) for p in paths]
    for r, p in enumerate(paths, start=1):
        if not p or not all(p):
            raise ValidationError(f"row {r}: paths must be non-empty sequences of labels")
    nodes = _hierarchy_nodes(paths, separator.join)
    if labels is None:
        labels = [separator.join(p) for p in paths]
    attr_labels = [separator.join(n) for n in nodes]
    rows = [mask_of(j for j, n in enumerate(nodes) if p[:len(n)] == n) for p in paths]
    return FormalContext(tuple(labels), tuple(attr_labels), tuple(rows))


# -- partial orders ---------------------------------------------------------

@dataclass(frozen=True)
class PartialOrder:
    """Strict dominance on items ``0..n-1``: ``relation[i] >> j & 1`` iff i ≺ j."""

    n: int
    relation: tuple[int, ...]

    def __post_init__(self):
        if len(self.relation) != self.n:
            raise DimensionError(f"relation has {len(self.relation)} rows for {self.n} items")
        for i, row in enumerate(self.relation):
            if row < 0 or row >> self.n:
                raise DimensionError(f"row {i} references unknown items")
        for i in range(self.n):
            if self.relation[i] >> i & 1:
                raise ValidationError(f"not irreflexive: item {i + 1} dominates itself")
        for i in range(self.n):
            for j in range(self.n):
                if self.relation[i] >> j & 1 and self.relation[j] >> i & 1:
                    raise ValidationError(f"not antisymmetric: items {i + 1} and {j + 1} dominate each other")
        for i in range(self.n):
            for j in range(self.n):
                if self.relation[i] >> j & 1:
                    missing = self.relation[j] & ~self.relation[i]
                    if missing:
                        k = (missing & -missing).bit_length() - 1
                        raise ValidationError(
                            f"not transitive: {i + 1}≺{j + 1} and {j + 1}≺{k + 1} but not {i + 1}≺{k + 1}"
                        )

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "PartialOrder":
        rel = [0] * n
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise DimensionError(f"pair ({i}, {j}) outside items 0..{n - 1}")
            rel[i] |= 1 << j
        return cls(n, tuple(rel))

    def dominates(self, i: int, j: int) -> bool:
        return bool(self.relation[i] >> j & 1)


def scale_posets(n_items: int, posets: Sequence[PartialOrder], labels: Optional[Sequence[str]] = None,
                 item_labels: Optional[Sequence[str]] = None, include_negations: bool = True) -> FormalContext:
    """Posets as objects; attributes ``i≺j`` then ``¬(i≺j)`` for ordered pairs i≠j.

    ``include_negations=False`` drops the non-dominance block.
    """
    for k, p in enumerate(posets):
        if p.n != n_items:
            raise DimensionError(f"poset {k + 1} is over {p.n} items, expected {n_items}")
    names = list(item_labels) if item_labels is not None else [str(i + 1) for i in range(n_items)]
    pairs = [(i, j) for i in range(n_items) for j in range(n_items) if i != j]
    attrs = [f"{names[i]}≺{names[j]}" for i, j in pairs]
    if include_negations:
        attrs += [f"¬({names[i]}≺{names[j]})" for i, j in pairs]
    k = len(pairs)
    rows = []
    for p in posets:
        pos = mask_of(t for t, (i, j) in enumerate(pairs) if p.dominates(i, j))
        if include_negations:
            pos |= mask_of(k + t for t, (i, j) in enumerate(pairs) if not p.dominates(i, j))
        rows.append(pos)
    if labels is None:
        labels = [f"p{t + 1}" for t in range(len(posets))]
    return FormalContext(tuple(labels), tuple(attrs), tuple(rows))


def read_posets(path):
    """Load ``{"items": [...], "posets": {"label": {"i": ["j", ...]}}}``.

    Returns ``(item_labels, poset_labels, posets)``.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return posets_from_dict(data)


def posets_from_dict(data: dict):
    items = [str(x) for x in data["items"]]
    index = {x: i for i, x in enumerate(items)}
    labels, posets = [], []
    for label, adjacency in data["posets"].items():
        pairs = []
        for src, targets in adjacency.items():
            for dst in targets:
                try:
                    pairs.append((index[str(src)], index[str(dst)]))
                except KeyError as exc:
                    raise IngestionError(f"poset {label!r}: unknown item {exc.args[0]!r}") from None
        labels.append(str(label))
        posets.append(PartialOrder.from_pairs(len(items), pairs))
    return items, labels, posets


# -- point clouds -----------------------------------------------------------

def _fmt_vector(u) -> str:
    return "(" + ",".join(format_number(x) for x in u) + ")"


def scale_halfspaces(points: Sequence[Sequence], directions: Optional[Sequence[Sequence]] = None,
                     labels: Optional[Sequence[str]] = None) -> FormalContext:
    """Finite halfspace context on a point cloud.

    For every direction ``u`` and every observed projection ``t`` the
    attributes ``⟨u,·⟩≤t`` and ``⟨u,·⟩≥t`` are added.  Directions default to
    the coordinate axes.  More directions approximate the closed convex hull
    closure more closely.
    """
    pts = [tuple(to_number(x) for x in p) for p in points]
    if not pts:
        raise ValidationError("need at least one point")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionError("points have different dimensions")
    if directions is None:
        directions = [tuple(int(i == k) for i in range(d)) for k in range(d)]
    dirs = [tuple(to_number(x) for x in u) for u in directions]
    if not dirs:
        raise ValidationError("need at least one direction")
    for u in dirs:
        if len(u) != d:
            raise DimensionError(f"direction {u} has dimension {len(u)}, points have {d}")
    attrs: list[str] = []
    rows = [0] * len(pts)
    for u in dirs:
        proj = [sum(a * b for a, b in zip(u, p)) for p in pts]
        ts = sorted(set(proj))
        name = f"⟨{_fmt_vector(u)},·⟩"
        base = len(attrs)
        attrs += [f"{name}{LE}{format_number(t)}" for t in ts]
        attrs += [f"{name}{GE}{format_number(t)}" for t in ts]
        k = len(ts)
        for g, v in enumerate(proj):
            rows[g] |= mask_of(base + j for j, t in enumerate(ts) if v <= t)
            rows[g] |= mask_of(base + k + j for j, t in enumerate(ts) if v >= t)
    if labels is None:
        labels = [f"x{i + 1}" for i in range(len(pts))]
    return FormalContext(tuple(labels), tuple(attrs), tuple(rows))


def read_points(path):
    """Load ``{"points": {"label": [x, y, ...]}, "directions": [[...], ...]}``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    pts = data["points"]
    if isinstance(pts, dict):
        labels, coords = list(pts.keys()), list(pts.values())
    else:
        labels, coords = None, pts
    return labels, coords, data.get("directions")
