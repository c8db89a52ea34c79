"""Structural property checks for depth functions on finite contexts.

Each checker returns a :class:`PropertyReport`.  A ``fails`` verdict always
carries a witness that can be re-evaluated by hand: object labels, the set
``A`` involved and the depth values compared.
"""
from __future__ import annotations

import itertools
import json
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .bitset import ObjectSet, iter_bits
from .context import DEFAULT_EXTENT_CAP, FormalContext, classify_objects, extent_masks
from .depth import TUKEY, DepthFunctionHandle, DepthMap, fmt_fraction, tukey_depths
from .errors import DimensionError, FcaDepthError, SizeLimitError, ValidationError
from .measure import DiscreteMeasure, Sample

HOLDS = "holds"
FAILS = "fails"
PREMISE_NOT_MET = "premise-not-met"
INCONCLUSIVE_CAP = "inconclusive-cap"

BRUTEFORCE_CAP = 12
STARSHAPED_CAP = 16
BIJECTION_SEARCH_CAP = 7


@dataclass
class PropertyReport:
    property: str
    verdict: str
    witness: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime_ms: Optional[float] = None
    parts: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict == FAILS

    def part(self, name: str) -> "PropertyReport":
        for p in self.parts:
            if p.property == name:
                return p
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "property": self.property,
            "verdict": self.verdict,
            "witness": _jsonable(self.witness),
            "notes": list(self.notes),
            "runtime_ms": round(self.runtime_ms, 3) if timing and self.runtime_ms is not None else None,
        }
        if self.parts:
            out["parts"] = [p.to_dict(timing) for p in self.parts]
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), ensure_ascii=False, indent=2)


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt_fraction(x)
    if isinstance(x, ObjectSet):
        return list(x.indices())
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def stamp(self, report: PropertyReport) -> PropertyReport:
        report.runtime_ms = (time.perf_counter() - self.start) * 1000.0
        return report

    def __exit__(self, *exc):
        return False


def _require_cap(what, size, cap):
    if size > cap:
        raise SizeLimitError(what, size, cap)


def _values(D: DepthFunctionHandle, ctx: FormalContext, measure: DiscreteMeasure) -> tuple:
    if measure.size != ctx.n_objects:
        raise DimensionError(f"measure over {measure.size} objects, context has {ctx.n_objects}")
    return D.values(ctx, measure)


def _names(ctx, mask) -> list:
    return ctx.object_names(mask)


def _min_table(n: int, vals: Sequence) -> list:
    """Minimum depth over every non-empty object subset, indexed by mask."""
    table = [None] * (1 << n)
    for a in range(1, 1 << n):
        low = a & -a
        v = vals[low.bit_length() - 1]
        rest = table[a ^ low]
        table[a] = v if rest is None or v < rest else rest
    return table


# -- representation properties ------------------------------------------------

def _permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for g in iter_bits(mask):
        out |= 1 << perm[g]
    return out


def _check_permutation(perm, n, what="bijection"):
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValidationError(f"{what} must be a permutation of 0..{n - 1}")


def p1_premises(ctx1, ctx2, m1, m2, bijection, cap=DEFAULT_EXTENT_CAP) -> Optional[dict]:
    """None when the extent and probability premises hold, else a witness dict."""
    fam1 = extent_masks(ctx1, cap)
    fam2 = set(extent_masks(ctx2, cap))
    mapped = {_permute_mask(e, bijection): e for e in fam1}
    for img, e in mapped.items():
        if img not in fam2:
            return {"reason": "extent not preserved", "extent": _names(ctx1, e), "image": _names(ctx2, img)}
    for e2 in fam2:
        if e2 not in mapped:
            return {"reason": "extent of second context has no preimage", "extent": _names(ctx2, e2)}
    for img, e in mapped.items():
        if m1.mass(e) != m2.mass(img):
            return {"reason": "probability not preserved", "extent": _names(ctx1, e),
                    "mass": m1.mass(e), "image_mass": m2.mass(img)}
    return None


def check_p1(ctx1: FormalContext, ctx2: FormalContext, m1: DiscreteMeasure, m2: DiscreteMeasure,
             bijection: Sequence[int], D: DepthFunctionHandle, cap: int = DEFAULT_EXTENT_CAP) -> PropertyReport:
    """Invariance on the extents, for one candidate bijection ``g -> bijection[g]``."""
    with _Timer() as t:
        n = ctx1.n_objects
        if ctx2.n_objects != n:
            raise DimensionError(f"contexts have {n} and {ctx2.n_objects} objects")
        _check_permutation(list(bijection), n)
        bad = p1_premises(ctx1, ctx2, m1, m2, bijection, cap)
        if bad is not None:
            return t.stamp(PropertyReport("P1", PREMISE_NOT_MET, bad))
        d1 = _values(D, ctx1, m1)
        d2 = _values(D, ctx2, m2)
        for g in range(n):
            for h in range(n):
                if (d1[g] <= d1[h]) != (d2[bijection[g]] <= d2[bijection[h]]):
                    return t.stamp(PropertyReport("P1", FAILS, {
                        "pair": [ctx1.object_labels[g], ctx1.object_labels[h]],
                        "depths_first": [d1[g], d1[h]],
                        "images": [ctx2.object_labels[bijection[g]], ctx2.object_labels[bijection[h]]],
                        "depths_second": [d2[bijection[g]], d2[bijection[h]]],
                    }))
        return t.stamp(PropertyReport("P1", HOLDS, {"bijection": list(bijection)}))


def find_p1_bijection(ctx1, ctx2, m1, m2, cap: int = BIJECTION_SEARCH_CAP) -> Optional[tuple]:
    """First permutation satisfying the P1 premises, by exhaustive search (|G| <= cap)."""
    n = ctx1.n_objects
    _require_cap("bijection search", n, cap)
    if ctx2.n_objects != n:
        raise DimensionError(f"contexts have {n} and {ctx2.n_objects} objects")
    for perm in itertools.permutations(range(n)):
        if p1_premises(ctx1, ctx2, m1, m2, perm) is None:
            return perm
    return None


def check_p2(ctx: FormalContext, measure: DiscreteMeasure, D: DepthFunctionHandle) -> PropertyReport:
    """Objects with equal intents get equal depth."""
    with _Timer() as t:
        vals = _values(D, ctx, measure)
        groups = classify_objects(ctx).duplicates()
        for grp in groups:
            for h in grp[1:]:
                if vals[h] != vals[grp[0]]:
                    return t.stamp(PropertyReport("P2", FAILS, {
                        "duplicates": [ctx.object_labels[grp[0]], ctx.object_labels[h]],
                        "depths": [vals[grp[0]], vals[h]],
                    }))
        notes = [] if groups else ["no duplicate objects; holds vacuously"]
        return t.stamp(PropertyReport("P2", HOLDS, {"duplicate_groups": [_names(ctx, sum(1 << g for g in grp))
                                                                         for grp in groups]}, notes))


# -- order preserving properties --------------------------------------------

def check_order_basics(ctx: FormalContext, measure: DiscreteMeasure, D: DepthFunctionHandle) -> PropertyReport:
    """Minimality (P3), maximality (P4) and isotonicity (P5) in one report."""
    with _Timer() as t:
        vals = _values(D, ctx, measure)
        cls = classify_objects(ctx)
        lo, hi = min(vals), max(vals)
        parts = []
        if len(cls.g_non) == 0:
            parts.append(PropertyReport("P3", PREMISE_NOT_MET, notes=["no object lies only in G"]))
        else:
            bad = [g for g in cls.g_non if vals[g] != lo]
            if bad:
                parts.append(PropertyReport("P3", FAILS, {"object": ctx.object_labels[bad[0]],
                                                          "depth": vals[bad[0]], "minimum": lo}))
            else:
                parts.append(PropertyReport("P3", HOLDS, {"g_non": _names(ctx, cls.g_non.bits), "minimum": lo}))
        if len(cls.g_all) == 0:
            parts.append(PropertyReport("P4", PREMISE_NOT_MET, notes=["no object lies in every extent"]))
        else:
            bad = [g for g in cls.g_all if vals[g] != hi]
            if bad:
                parts.append(PropertyReport("P4", FAILS, {"object": ctx.object_labels[bad[0]],
                                                          "depth": vals[bad[0]], "maximum": hi}))
            else:
                parts.append(PropertyReport("P4", HOLDS, {"g_all": _names(ctx, cls.g_all.bits), "maximum": hi}))
        p5 = PropertyReport("P5", HOLDS)
        n = ctx.n_objects
        closures = [ctx.object_closure(g) for g in range(n)]
        for g1 in range(n):
            for g2 in range(n):
                # γ({g1}) ⊇ γ({g2}) requires D(g1) <= D(g2)
                if closures[g2] & ~closures[g1] == 0 and not vals[g1] <= vals[g2]:
                    p5 = PropertyReport("P5", FAILS, {
                        "g1": ctx.object_labels[g1], "g2": ctx.object_labels[g2],
                        "closure_g1": _names(ctx, closures[g1]), "closure_g2": _names(ctx, closures[g2]),
                        "depths": [vals[g1], vals[g2]],
                    })
                    break
            if p5.fails:
                break
        parts.append(p5)
        verdicts = [p.verdict for p in parts]
        if FAILS in verdicts:
            verdict = FAILS
        elif HOLDS in verdicts:
            verdict = HOLDS
        else:
            verdict = PREMISE_NOT_MET
        return t.stamp(PropertyReport("P3-P5", verdict, parts=parts))


def starshaped_centers(ctx: FormalContext, vals: Sequence) -> tuple[list[int], dict]:
    """All centres and, per rejected centre, one violating pair."""
    n = ctx.n_objects
    centers, violations = [], {}
    for c in range(n):
        bad = None
        for g in range(n):
            span = ctx.gamma((1 << c) | (1 << g))
            for h in iter_bits(span):
                if vals[h] < vals[g]:
                    bad = (g, h)
                    break
            if bad:
                break
        if bad is None:
            centers.append(c)
        else:
            violations[c] = bad
    return centers, violations


def check_starshaped(ctx: FormalContext, measure: DiscreteMeasure, D: DepthFunctionHandle,
                     cap: int = STARSHAPED_CAP) -> PropertyReport:
    """P6.  Witness lists every centre; holds iff there is at least one."""
    with _Timer() as t:
        _require_cap("starshapedness check", ctx.n_objects, cap)
        vals = _values(D, ctx, measure)
        centers, violations = starshaped_centers(ctx, vals)
        top = max(vals)
        argmax = [g for g, v in enumerate(vals) if v == top]
        quasi = _contour_violation(ctx, vals) is None
        witness = {"centers": [ctx.object_labels[c] for c in centers],
                   "argmax": [ctx.object_labels[g] for g in argmax], "quasiconcave": quasi}
        if quasi and not set(argmax) <= set(centers):
            raise AssertionError("quasiconcave depth with a maximiser that is not a centre")
        if centers:
            return t.stamp(PropertyReport("P6", HOLDS, witness))
        c = argmax[0]
        g, h = violations[c]
        witness["counterexample"] = {"center": ctx.object_labels[c], "g": ctx.object_labels[g],
                                     "in_closure": ctx.object_labels[h], "depths": [vals[g], vals[h]]}
        return t.stamp(PropertyReport("P6", FAILS, witness))


@dataclass(frozen=True)
class QuasiKer:
    """Pairs ``(A, g)`` with ``g`` in the closure of ``A`` but not in ``A`` and
    ``D(g)`` equal to the minimum depth over ``A``."""

    pairs: tuple[tuple[ObjectSet, int], ...]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def verify(self, ctx: FormalContext, vals: Sequence) -> bool:
        for A, g in self.pairs:
            closed = ctx.gamma(A.bits)
            if not (closed >> g & 1) or A.bits >> g & 1:
                return False
            if vals[g] != min(vals[a] for a in A):
                return False
        return True


def _contour_violation(ctx, vals):
    for alpha in sorted(set(vals), reverse=True):
        cont = sum(1 << g for g, v in enumerate(vals) if v >= alpha)
        closed = ctx.gamma(cont)
        if closed != cont:
            return alpha, cont, closed
    return None


def _closure_scan(ctx, vals, cap, strict):
    """Scan all non-empty A; returns (first violation or None, quasiker pairs)."""
    n = ctx.n_objects
    _require_cap("closure brute force", n, cap)
    closures = ctx.closure_table(cap)
    mins = _min_table(n, vals)
    ker = []
    violation = None
    for a in range(1, 1 << n):
        extra = closures[a] & ~a
        if not extra:
            continue
        low = mins[a]
        for g in iter_bits(extra):
            v = vals[g]
            if v == low:
                ker.append((ObjectSet(a, n), g))
                if strict and violation is None:
                    violation = (a, g)
            elif v < low and violation is None:
                violation = (a, g)
    return violation, ker


def _closure_witness(ctx, vals, a, g):
    mins = min(vals[x] for x in iter_bits(a))
    return {"A": _names(ctx, a), "g": ctx.object_labels[g], "closure": _names(ctx, ctx.gamma(a)),
            "depth_g": vals[g], "min_over_A": mins}


def check_quasiconcavity(ctx: FormalContext, measure: DiscreteMeasure, D: DepthFunctionHandle,
                         mode: str = "both", cap: int = BRUTEFORCE_CAP):
    """P7i (``contour``), P7ii (``bruteforce``) or both.

    Returns ``(report, quasiker)``; ``quasiker`` is None in contour mode.
    In ``both`` mode the two verdicts must agree.
    """
    if mode not in ("contour", "bruteforce", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    with _Timer() as t:
        vals = _values(D, ctx, measure)
        witness: dict = {"mode": mode}
        contour_verdict = brute_verdict = None
        if mode in ("contour", "both"):
            bad = _contour_violation(ctx, vals)
            contour_verdict = HOLDS if bad is None else FAILS
            if bad is not None:
                alpha, cont, closed = bad
                witness["contour"] = {"alpha": alpha, "contour": _names(ctx, cont),
                                      "closure": _names(ctx, closed)}
        ker = None
        if mode in ("bruteforce", "both"):
            violation, pairs = _closure_scan(ctx, vals, cap, strict=False)
            ker = QuasiKer(tuple(pairs))
            brute_verdict = HOLDS if violation is None else FAILS
            if violation is not None:
                witness["counterexample"] = _closure_witness(ctx, vals, *violation)
            witness["quasiker_size"] = len(ker)
        if mode == "both" and contour_verdict != brute_verdict:
            raise AssertionError(f"contour ({contour_verdict}) and brute force ({brute_verdict}) disagree")
        verdict = contour_verdict or brute_verdict
        return t.stamp(PropertyReport("P7", verdict, witness)), ker


def check_strict_quasiconcavity(ctx: FormalContext, measure: DiscreteMeasure, D: DepthFunctionHandle,
                                cap: int = BRUTEFORCE_CAP) -> PropertyReport:
    """P8 over non-empty ``A`` only (an empty ``A`` has no minimum to exceed)."""
    with _Timer() as t:
        vals = _values(D, ctx, measure)
        violation, _ = _closure_scan(ctx, vals, cap, strict=True)
        if violation is None:
            return t.stamp(PropertyReport("P8", HOLDS))
        return t.stamp(PropertyReport("P8", FAILS, {"counterexample": _closure_witness(ctx, vals, *violation)}))


def detect_p8_blocked(ctx: FormalContext, cap: int = BRUTEFORCE_CAP) -> PropertyReport:
    """Search for a certificate that no depth function can be strictly quasiconcave.

    Certificates, tried in order: duplicate intents; disjoint non-empty A, Ã
    with each inside the other's closure; a triple where each object lies in
    the closure of the other two; a larger set where every member lies in the
    closure of the rest.  No certificate is reported as ``inconclusive-cap``.
    """
    with _Timer() as t:
        n = ctx.n_objects
        _require_cap("P8 blocking search", n, cap)
        verdict_hit = "holds"
        dups = classify_objects(ctx).duplicates()
        if dups:
            a, b = dups[0][:2]
            return t.stamp(PropertyReport("C_notP8", verdict_hit, {
                "certificate": "duplicates", "A": [ctx.object_labels[a]], "A_tilde": [ctx.object_labels[b]]}))
        closures = ctx.closure_table(cap)
        # smallest |A ∪ Ã| first
        by_size = sorted(range(1, 1 << n), key=lambda m: (m.bit_count(), m))
        for a in by_size:
            room = closures[a] & ~a
            sub = room
            while sub:
                if closures[sub] & a == a:
                    return t.stamp(PropertyReport("C_notP8", verdict_hit, {
                        "certificate": "mutual-closure", "A": _names(ctx, a), "A_tilde": _names(ctx, sub)}))
                sub = (sub - 1) & room
        for x, y, z in itertools.combinations(range(n), 3):
            bx, by, bz = 1 << x, 1 << y, 1 << z
            if closures[by | bz] & bx and closures[bx | bz] & by and closures[bx | by] & bz:
                return t.stamp(PropertyReport("C_notP8", verdict_hit, {
                    "certificate": "cyclic-triple", "objects": _names(ctx, bx | by | bz)}))
        for s in by_size:
            if s.bit_count() < 4:
                continue
            if all(closures[s & ~(1 << g)] >> g & 1 for g in iter_bits(s)):
                return t.stamp(PropertyReport("C_notP8", verdict_hit, {
                    "certificate": "cyclic-set", "objects": _names(ctx, s)}))
        return t.stamp(PropertyReport("C_notP8", INCONCLUSIVE_CAP,
                                      notes=["no certificate found; the detector is not complete"]))


def check_c_p8_membership(ctx: FormalContext, measure: DiscreteMeasure, cap: int = BRUTEFORCE_CAP) -> PropertyReport:
    """Sufficient condition for the Tukey depth to be strictly quasiconcave.

    Membership is cross-checked against :func:`check_strict_quasiconcavity`.
    """
    with _Timer() as t:
        n = ctx.n_objects
        _require_cap("membership check", n, cap)
        if measure.size != n:
            raise DimensionError(f"measure over {measure.size} objects, context has {n}")
        dups = classify_objects(ctx).duplicates()
        if dups:
            return t.stamp(PropertyReport("C_P8", FAILS, {
                "reason": "duplicate intents", "objects": [ctx.object_labels[g] for g in dups[0]]}))
        closures = ctx.closure_table(cap)
        masses = [measure.mass_numerator(c) for c in ctx.cols]
        full = ctx.all_attributes
        outside = [max((masses[m] for m in iter_bits(full & ~r)), default=0) for r in ctx.rows]
        union = [0] * (1 << n)
        common = [full] * (1 << n)
        for a in range(1, 1 << n):
            low = a & -a
            g0 = low.bit_length() - 1
            union[a] = union[a ^ low] | ctx.rows[g0]
            common[a] = common[a ^ low] & ctx.rows[g0]
            for g in iter_bits(closures[a] & ~a):
                row = ctx.rows[g]
                if union[a] & ~row:
                    return t.stamp(PropertyReport("C_P8", FAILS, {
                        "reason": "implied object lacks an attribute of A", "A": _names(ctx, a),
                        "g": ctx.object_labels[g], "missing": ctx.attribute_names(union[a] & ~row)}))
                if not any(masses[m] > outside[g] for m in iter_bits(row & ~common[a])):
                    return t.stamp(PropertyReport("C_P8", FAILS, {
                        "reason": "no separating attribute", "A": _names(ctx, a), "g": ctx.object_labels[g],
                        "max_outside": Fraction(outside[g], measure.denominator)}))
        cross = check_strict_quasiconcavity(ctx, measure, TUKEY, cap)
        if not cross.holds:
            raise AssertionError("member context where the Tukey depth is not strictly quasiconcave")
        return t.stamp(PropertyReport("C_P8", HOLDS, {"tukey_P8": cross.verdict}))


# -- empirical properties -----------------------------------------------------

def _object(ctx, g) -> int:
    return ctx.object_index(g) if isinstance(g, str) else int(g)


def check_p9(ctx: FormalContext, sample: Sample, dup_indices: tuple[int, int], D: DepthFunctionHandle) -> PropertyReport:
    """Respecting duplicates.  ``dup_indices`` are positions in the sample.

    The depth of ``sample[j]`` must strictly drop when the copy at position
    ``i`` is removed.  When no sampled object has an attribute that
    ``sample[j]`` lacks, the Tukey sup term is 0 on both sides; that case is
    reported as premise-not-met with a note rather than as a failure.
    """
    with _Timer() as t:
        i, j = dup_indices
        if i == j or not (0 <= i < len(sample) and 0 <= j < len(sample)):
            raise ValidationError("dup_indices must be two distinct sample positions")
        gi, gj = sample.indices[i], sample.indices[j]
        if ctx.rows[gi] != ctx.rows[gj]:
            raise ValidationError(f"objects {ctx.object_labels[gi]!r} and {ctx.object_labels[gj]!r} differ in intent")
        with_dup = _values(D, ctx, DiscreteMeasure.from_sample(sample))[gj]
        rest = sample.without_position(i)
        without = _values(D, ctx, DiscreteMeasure.from_sample(rest))[gj]
        witness = {"object": ctx.object_labels[gj], "with_duplicate": with_dup, "without_duplicate": without}
        if without < with_dup:
            return t.stamp(PropertyReport("P9", HOLDS, witness))
        row = ctx.rows[gj]
        if all(ctx.rows[h] & ~row == 0 for h in sample.indices):
            return t.stamp(PropertyReport("P9", PREMISE_NOT_MET, witness, [
                "no sampled object has an attribute the duplicate lacks; the Tukey sup term is 0 "
                "with and without the copy, so strict increase is impossible"]))
        return t.stamp(PropertyReport("P9", FAILS, witness))


def _same_order(vals1, vals2, objs) -> Optional[tuple]:
    for a in objs:
        for b in objs:
            if (vals1[a] <= vals1[b]) != (vals2[a] <= vals2[b]):
                return a, b
    return None


def check_p10(ctx: FormalContext, sample: Sample, outlier, D: DepthFunctionHandle) -> PropertyReport:
    """Stability of the order of the other sampled objects when the outlier is dropped."""
    with _Timer() as t:
        o = _object(ctx, outlier)
        if o not in sample.indices:
            raise ValidationError(f"outlier {ctx.object_labels[o]!r} is not in the sample")
        pos = sample.indices.index(o)
        rest = sample.without_position(pos)
        if len(rest) == 0:
            return t.stamp(PropertyReport("P10", PREMISE_NOT_MET, notes=["sample has no other object"]))
        for h in rest.indices:
            closed = ctx.gamma((1 << o) | (1 << h))
            if closed != ctx.all_objects:
                return t.stamp(PropertyReport("P10", PREMISE_NOT_MET, {
                    "outlier": ctx.object_labels[o], "shares_extent_with": ctx.object_labels[h],
                    "extent": _names(ctx, closed)}))
        others = sorted(set(rest.indices))
        with_o = _values(D, ctx, DiscreteMeasure.from_sample(sample))
        without_o = _values(D, ctx, DiscreteMeasure.from_sample(rest))
        witness = {
            "outlier": ctx.object_labels[o],
            "with_outlier": {ctx.object_labels[g]: with_o[g] for g in others},
            "without_outlier": {ctx.object_labels[g]: without_o[g] for g in others},
        }
        bad = _same_order(with_o, without_o, others)
        if bad is None:
            return t.stamp(PropertyReport("P10", HOLDS, witness))
        witness["unstable_pair"] = [ctx.object_labels[bad[0]], ctx.object_labels[bad[1]]]
        return t.stamp(PropertyReport("P10", FAILS, witness))


@dataclass(frozen=True)
class ConsistencyTable:
    """Sup-gap statistics per sample size."""

    rows: tuple[dict, ...]
    seed: int
    trials: int

    def means(self) -> list[float]:
        return [r["mean"] for r in self.rows]

    def non_increasing(self, noise: float = 0.0) -> bool:
        m = self.means()
        return all(b <= a + noise for a, b in zip(m, m[1:]))

    def to_dict(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "rows": [dict(r) for r in self.rows]}


def simulate_consistency(ctx: FormalContext, measure: DiscreteMeasure, sample_sizes: Sequence[int], trials: int,
                         seed: int) -> ConsistencyTable:
    """Monte-Carlo decay of sup_g |T^(n)(g) - T(g)| for i.i.d. samples.

    Every (size, trial) pair gets its own child of ``SeedSequence(seed)`` so
    results do not depend on evaluation order.
    """
    if trials < 1 or not sample_sizes:
        raise FcaDepthError("need at least one trial and one sample size")
    if any(n < 1 for n in sample_sizes):
        raise FcaDepthError("sample sizes must be positive")
    if measure.size != ctx.n_objects:
        raise DimensionError("measure and context disagree on the number of objects")
    population = tukey_depths(ctx, measure)
    probs = np.array([float(w) for w in measure.weights])
    probs = probs / probs.sum()
    full = ctx.all_attributes
    lacking = [list(iter_bits(full & ~r)) for r in ctx.rows]
    col_members = [list(iter_bits(c)) for c in ctx.cols]
    children = np.random.SeedSequence(seed).spawn(len(sample_sizes))
    rows = []
    for n, child in zip(sample_sizes, children):
        gaps = []
        for trial_seq in child.spawn(trials):
            counts = np.random.default_rng(trial_seq).multinomial(n, probs).tolist()
            col_counts = [sum(counts[h] for h in members) for members in col_members]
            gap = max(
                abs(1 - Fraction(max((col_counts[m] for m in lacking[g]), default=0), n) - population[g])
                for g in range(ctx.n_objects)
            )
            gaps.append(float(gap))
        rows.append({"n": int(n), "mean": statistics.fmean(gaps), "median": statistics.median(gaps),
                     "max": max(gaps)})
    return ConsistencyTable(tuple(rows), seed, trials)


def consistency_report(table: ConsistencyTable, noise: float = 0.01, final_tolerance: float = 0.05) -> PropertyReport:
    """P11 evidence: means non-increasing up to ``noise`` and the last below ``final_tolerance``."""
    ok = table.non_increasing(noise) and table.rows[-1]["mean"] < final_tolerance
    return PropertyReport("P11", HOLDS if ok else FAILS, table.to_dict(),
                          [f"Monte-Carlo evidence only (noise {noise}, final tolerance {final_tolerance})"])


# -- symmetry ---------------------------------------------------------------------

def check_symmetry_center(ctx: FormalContext, measure: DiscreteMeasure, involution: Sequence[int], s,
                          D: DepthFunctionHandle, cap: int = DEFAULT_EXTENT_CAP) -> PropertyReport:
    """Point symmetry: if the premises hold, ``s`` should have maximal depth."""
    with _Timer() as t:
        n = ctx.n_objects
        inv = list(involution)
        _check_permutation(inv, n, "involution")
        if any(inv[inv[g]] != g for g in range(n)):
            raise ValidationError("map is not an involution")
        s = _object(ctx, s)
        for e in extent_masks(ctx, cap):
            img = _permute_mask(e, inv)
            if measure.mass(img) != measure.mass(e):
                return t.stamp(PropertyReport("SYM", PREMISE_NOT_MET, {
                    "reason": "measure not invariant", "extent": _names(ctx, e), "image": _names(ctx, img)}))
        for g in range(n):
            closed = ctx.gamma((1 << g) | (1 << inv[g]))
            if not closed >> s & 1:
                return t.stamp(PropertyReport("SYM", PREMISE_NOT_MET, {
                    "reason": "centre outside a pair closure", "g": ctx.object_labels[g],
                    "image": ctx.object_labels[inv[g]], "closure": _names(ctx, closed)}))
        vals = _values(D, ctx, measure)
        top = max(vals)
        witness = {"s": ctx.object_labels[s], "depth_s": vals[s], "maximum": top}
        if vals[s] == top:
            return t.stamp(PropertyReport("SYM", HOLDS, witness))
        notes = []
        if n <= STARSHAPED_CAP and starshaped_centers(ctx, vals)[0]:
            notes.append("depth is starshaped here, so it cannot be invariant on the extents")
        return t.stamp(PropertyReport("SYM", FAILS, witness, notes))


# -- weak freeness --------------------------------------------------------------

def construct_weakly_free(ctx: FormalContext, target: Union[DepthMap, Sequence]):
    """Measure under which the Tukey depth reproduces a quasiconcave target.

    Objects are layered by increasing target value; each object of a layer
    gets weight one more than the total weight of all lower layers.  Returns
    ``(measure, level_map, report)`` where ``level_map`` lists the isotone
    ``(tukey value, target value)`` pairs.
    """
    with _Timer() as t:
        vals = tuple(Fraction(v) for v in (target.values if isinstance(target, DepthMap) else target))
        if len(vals) != ctx.n_objects:
            raise DimensionError(f"target has {len(vals)} values for {ctx.n_objects} objects")
        bad = _contour_violation(ctx, vals)
        if bad is not None:
            alpha, cont, closed = bad
            raise ValidationError(
                f"target is not quasiconcave: contour at {alpha} {_names(ctx, cont)} has closure {_names(ctx, closed)}"
            )
        levels = sorted(set(vals))
        weights = [0] * ctx.n_objects
        lower_total = 0
        for level in levels:
            layer = [g for g, v in enumerate(vals) if v == level]
            w = lower_total + 1
            for g in layer:
                weights[g] = w
            lower_total += w * len(layer)
        measure = DiscreteMeasure.from_weights(weights)
        tukey = tukey_depths(ctx, measure)
        mapping: dict = {}
        consistent = True
        for tv, ev in zip(tukey, vals):
            if mapping.setdefault(tv, ev) != ev:
                consistent = False
        pairs = sorted(mapping.items())
        isotone = all(a[1] <= b[1] for a, b in zip(pairs, pairs[1:]))
        witness = {"weights": list(measure.weights), "tukey": list(tukey), "level_map": pairs}
        if consistent and isotone:
            report = PropertyReport("WFREE", HOLDS, witness)
        else:
            report = PropertyReport("WFREE", FAILS, witness, ["no isotone map sends the Tukey depths onto the target"])
        return measure, pairs, t.stamp(report)


# -- implication chain ---------------------------------------------------------

def check_implication_chain(ctx: FormalContext, measure: DiscreteMeasure, D: DepthFunctionHandle,
                            cap: int = BRUTEFORCE_CAP) -> tuple[dict, list]:
    """Run P3-P8 and list every antecedent-holds/consequent-fails violation."""
    basics = check_order_basics(ctx, measure, D)
    p6 = check_starshaped(ctx, measure, D, max(cap, 1))
    p7, _ = check_quasiconcavity(ctx, measure, D, "both", cap)
    p8 = check_strict_quasiconcavity(ctx, measure, D, cap)
    v = {"P3": basics.part("P3").verdict, "P4": basics.part("P4").verdict, "P5": basics.part("P5").verdict,
         "P6": p6.verdict, "P7": p7.verdict, "P8": p8.verdict}
    problems = []
    if v["P8"] == HOLDS and v["P7"] != HOLDS:
        problems.append("P8 => P7ii")
    if v["P7"] == HOLDS and v["P5"] != HOLDS:
        problems.append("P7ii => P5")
    if v["P7"] == HOLDS and not set(p6.witness["argmax"]) <= set(p6.witness["centers"]):
        problems.append("P7ii + maximiser => P6")
    if v["P6"] == HOLDS and v["P5"] != HOLDS:
        problems.append("P6 => P5")
    if v["P5"] == HOLDS and (v["P3"] == FAILS or v["P4"] == FAILS):
        problems.append("P5 => P3, P4")
    return v, problems
