"""Finite formal contexts, derivation operators and the extent family."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bitset import AttributeSet, ObjectSet, iter_bits, mask_of
from .errors import DimensionError, SizeLimitError, ValidationError

DEFAULT_EXTENT_CAP = 24


@dataclass(frozen=True)
class FormalContext:
    """Objects, attributes and an incidence relation between them.

    ``rows[g]`` is the attribute mask of object ``g`` and ``cols[m]`` the
    object mask of attribute ``m``; ``cols`` is derived from ``rows``.
    Contexts are immutable; the edit helpers return new contexts.
    """

    object_labels: tuple[str, ...]
    attribute_labels: tuple[str, ...]
    rows: tuple[int, ...]
    cols: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        objs = tuple(str(x) for x in self.object_labels)
        attrs = tuple(str(x) for x in self.attribute_labels)
        rows = tuple(int(r) for r in self.rows)
        _require_unique(objs, "object")
        _require_unique(attrs, "attribute")
        if len(rows) != len(objs):
            raise DimensionError(f"{len(rows)} incidence rows for {len(objs)} objects")
        full = (1 << len(attrs)) - 1
        for g, r in enumerate(rows):
            if r < 0 or r & ~full:
                raise DimensionError(f"row of object {objs[g]!r} references unknown attributes")
        cols = [0] * len(attrs)
        for g, r in enumerate(rows):
            for m in iter_bits(r):
                cols[m] |= 1 << g
        object.__setattr__(self, "object_labels", objs)
        object.__setattr__(self, "attribute_labels", attrs)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", tuple(cols))
        object.__setattr__(self, "_cache", {})

    # -- construction -------------------------------------------------------

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]], objects=None, attributes=None):
        """Build from a boolean matrix (one row per object)."""
        matrix = [list(r) for r in matrix]
        n_attrs = len(matrix[0]) if matrix else len(attributes or ())
        if any(len(r) != n_attrs for r in matrix):
            raise DimensionError("ragged incidence matrix")
        objects = list(objects) if objects is not None else [f"g{i + 1}" for i in range(len(matrix))]
        attributes = list(attributes) if attributes is not None else [f"m{j + 1}" for j in range(n_attrs)]
        rows = [mask_of(j for j, v in enumerate(r) if v) for r in matrix]
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    @classmethod
    def from_strings(cls, lines: Iterable[str], objects=None, attributes=None):
        """Build from rows written as ``"X.X"`` strings (``X``/``x`` = incidence)."""
        return cls.from_matrix([[c in "Xx" for c in line] for line in lines], objects, attributes)

    @classmethod
    def from_crosses(cls, objects: Sequence[str], attributes: Sequence[str], crosses):
        """Build from a mapping ``object label -> iterable of attribute labels``."""
        pos = {a: j for j, a in enumerate(attributes)}
        rows = []
        for g in objects:
            try:
                rows.append(mask_of(pos[a] for a in crosses.get(g, ())))
            except KeyError as exc:
                raise ValidationError(f"object {g!r} has unknown attribute {exc.args[0]!r}") from None
        return cls(tuple(objects), tuple(attributes), tuple(rows))

    # -- sizes and lookups -------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_labels)

    @property
    def all_objects(self) -> int:
        return (1 << self.n_objects) - 1

    @property
    def all_attributes(self) -> int:
        return (1 << self.n_attributes) - 1

    @property
    def incidence_rows(self) -> tuple[AttributeSet, ...]:
        return tuple(AttributeSet(r, self.n_attributes) for r in self.rows)

    @property
    def incidence_cols(self) -> tuple[ObjectSet, ...]:
        return tuple(ObjectSet(c, self.n_objects) for c in self.cols)

    def has(self, g: int, m: int) -> bool:
        return bool(self.rows[g] >> m & 1)

    def object_index(self, label: str) -> int:
        try:
            return self.object_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown object {label!r}") from None

    def attribute_index(self, label: str) -> int:
        try:
            return self.attribute_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown attribute {label!r}") from None

    def objects(self, items: Iterable = ()) -> ObjectSet:
        """ObjectSet from labels and/or indices."""
        return ObjectSet.of(self.n_objects, (i if isinstance(i, int) else self.object_index(i) for i in items))

    def attributes(self, items: Iterable = ()) -> AttributeSet:
        return AttributeSet.of(
            self.n_attributes, (i if isinstance(i, int) else self.attribute_index(i) for i in items)
        )

    def object_names(self, mask) -> list[str]:
        if isinstance(mask, ObjectSet):
            mask = mask.bits
        return [self.object_labels[g] for g in iter_bits(mask)]

    def attribute_names(self, mask) -> list[str]:
        if isinstance(mask, AttributeSet):
            mask = mask.bits
        return [self.attribute_labels[m] for m in iter_bits(mask)]

    # -- mask-level derivation operators -----------------------------------

    def psi(self, objs: int) -> int:
        """Common attributes of an object mask; psi(0) is every attribute."""
        out = self.all_attributes
        for g in iter_bits(objs):
            out &= self.rows[g]
        return out

    def phi(self, attrs: int) -> int:
        """Objects having every attribute of the mask; phi(0) is every object."""
        out = self.all_objects
        for m in iter_bits(attrs):
            out &= self.cols[m]
        return out

    def gamma(self, objs: int) -> int:
        return self.phi(self.psi(objs))

    def object_closure(self, g: int) -> int:
        """Cached closure of the singleton ``{g}``."""
        cache = self._cache.setdefault("singletons", {})
        if g not in cache:
            cache[g] = self.phi(self.rows[g])
        return cache[g]

    def closure_table(self, cap: int = 16) -> list[int]:
        """Closure of every object subset, indexed by mask (|G| <= cap)."""
        if self.n_objects > cap:
            raise SizeLimitError("closure table", self.n_objects, cap)
        table = self._cache.get("closure_table")
        if table is None:
            n = self.n_objects
            psi = [0] * (1 << n)
            psi[0] = self.all_attributes
            table = [0] * (1 << n)
            table[0] = self.phi(psi[0])
            for a in range(1, 1 << n):
                low = a & -a
                psi[a] = psi[a ^ low] & self.rows[low.bit_length() - 1]
                table[a] = self.phi(psi[a])
            self._cache["closure_table"] = table
        return table

    # -- editing and identity ----------------------------------------------

    def select_attributes(self, order: Sequence[int]) -> "FormalContext":
        """New context keeping (and reordering to) the given attribute indices."""
        labels = tuple(self.attribute_labels[j] for j in order)
        rows = tuple(mask_of(k for k, j in enumerate(order) if r >> j & 1) for r in self.rows)
        return FormalContext(self.object_labels, labels, rows)

    def appose(self, other: "FormalContext") -> "FormalContext":
        """Concatenate the attribute sets of two contexts on the same objects."""
        if other.object_labels != self.object_labels:
            raise DimensionError("apposition needs identical object lists")
        shift = self.n_attributes
        rows = tuple(a | b << shift for a, b in zip(self.rows, other.rows))
        return FormalContext(self.object_labels, self.attribute_labels + other.attribute_labels, rows)

    def fingerprint(self) -> str:
        payload = json.dumps([self.object_labels, self.attribute_labels, self.rows], ensure_ascii=False)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]

    def __repr__(self):
        return f"FormalContext(|G|={self.n_objects}, |M|={self.n_attributes})"


def _require_unique(labels, kind):
    seen = set()
    for x in labels:
        if x in seen:
            raise ValidationError(f"duplicate {kind} label {x!r}")
        seen.add(x)


def _objects_arg(ctx: FormalContext, A) -> int:
    if isinstance(A, ObjectSet):
        if A.size != ctx.n_objects:
            raise DimensionError(f"object set of size {A.size} used with context of {ctx.n_objects} objects")
        return A.bits
    raise TypeError(f"expected ObjectSet, got {type(A).__name__}")


def _attributes_arg(ctx: FormalContext, B) -> int:
    if isinstance(B, AttributeSet):
        if B.size != ctx.n_attributes:
            raise DimensionError(
                f"attribute set of size {B.size} used with context of {ctx.n_attributes} attributes"
            )
        return B.bits
    raise TypeError(f"expected AttributeSet, got {type(B).__name__}")


def intent(ctx: FormalContext, A: ObjectSet) -> AttributeSet:
    """Attributes shared by every object of ``A`` (all of M when ``A`` is empty)."""
    return AttributeSet(ctx.psi(_objects_arg(ctx, A)), ctx.n_attributes)


def extent_of(ctx: FormalContext, B: AttributeSet) -> ObjectSet:
    """Objects having every attribute of ``B`` (all of G when ``B`` is empty)."""
    return ObjectSet(ctx.phi(_attributes_arg(ctx, B)), ctx.n_objects)


def closure(ctx: FormalContext, A: ObjectSet) -> ObjectSet:
    return ObjectSet(ctx.gamma(_objects_arg(ctx, A)), ctx.n_objects)


@dataclass(frozen=True)
class ExtentFamily:
    """Deduplicated extents in canonical order (size, then sorted indices)."""

    extents: tuple[ObjectSet, ...]

    def __iter__(self):
        return iter(self.extents)

    def __len__(self):
        return len(self.extents)

    def __contains__(self, item):
        return item in self.masks

    @property
    def masks(self) -> frozenset:
        return frozenset(e.bits for e in self.extents)

    @classmethod
    def from_masks(cls, masks: Iterable[int], size: int) -> "ExtentFamily":
        sets = {ObjectSet(m, size) for m in masks}
        return cls(tuple(sorted(sets, key=ObjectSet.sort_key)))


def extent_masks(ctx: FormalContext, cap: int = DEFAULT_EXTENT_CAP) -> list[int]:
    """Close-by-One over objects; returns extent masks in generation order."""
    n = ctx.n_objects
    if n > cap:
        raise SizeLimitError("extent enumeration", n, cap)
    out = []
    start = ctx.gamma(0)
    out.append(start)
    # (extent, next object to try) pairs; depth-first, canonicity test on the prefix
    stack = [(start, 0)]
    while stack:
        ext, y = stack.pop()
        children = []
        for j in range(y, n):
            bit = 1 << j
            if ext & bit:
                continue
            nxt = ctx.gamma(ext | bit)
            prefix = bit - 1
            if nxt & prefix == ext & prefix:
                children.append((nxt, j + 1))
        out.extend(c for c, _ in children)
        stack.extend(reversed(children))
    return out


def all_extents(ctx: FormalContext, cap: int = DEFAULT_EXTENT_CAP) -> ExtentFamily:
    """Every extent of ``ctx`` in canonical order.

    Raises :class:`SizeLimitError` when ``|G| > cap``; the family can be
    exponential in ``|G|``.
    """
    return ExtentFamily.from_masks(extent_masks(ctx, cap), ctx.n_objects)


@dataclass(frozen=True)
class ObjectClassification:
    duplicate_groups: tuple[tuple[int, ...], ...]
    g_all: ObjectSet
    g_non: ObjectSet

    def duplicates(self):
        """Only the groups with at least two members."""
        return tuple(grp for grp in self.duplicate_groups if len(grp) > 1)


def classify_objects(ctx: FormalContext) -> ObjectClassification:
    """Duplicate groups, objects in every extent, objects only in G."""
    groups: dict[int, list[int]] = {}
    for g, r in enumerate(ctx.rows):
        groups.setdefault(r, []).append(g)
    g_all = ctx.phi(ctx.all_attributes)
    g_non = mask_of(g for g in range(ctx.n_objects) if ctx.object_closure(g) == ctx.all_objects)
    return ObjectClassification(
        tuple(tuple(v) for v in groups.values()),
        ObjectSet(g_all, ctx.n_objects),
        ObjectSet(g_non, ctx.n_objects),
    )
