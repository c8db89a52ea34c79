"""Acceptance gate.  Each test is one criterion; the run summary prints PASS/FAIL per line."""
import time
from fractions import Fraction as F

import pytest

from fcadepth import (
    HIER_FREE, TUKEY, DiscreteMeasure, Sample, all_extents, check_implication_chain, check_order_basics,
    check_p2, check_p10, check_quasiconcavity, check_starshaped, construct_weakly_free, detect_p8_blocked,
    dumps_cxt, empirical_tukey, loads_cxt, simulate_consistency, tukey_depths, tukey_oracle,
)

from golden import (
    OCCUPATION_EXTENTS, TITANIC_AGE_EXTENTS, all_golden, cyclic_triangle, marginal_twins_first,
    marginal_twins_second, occupation_hierarchy, outlier_example_context, titanic_snippet,
)
from strategies import quasiconcave_target, random_context, random_corpus

CORPUS_SEED = 20240601
CORPUS_SIZE = 1000


def family(ctx):
    return {frozenset(ctx.object_names(e.bits)) for e in all_extents(ctx)}


@pytest.fixture(scope="module")
def corpus():
    return list(random_corpus(CORPUS_SEED, CORPUS_SIZE))


@pytest.mark.criterion("1a", "Titanic snippet: extent family equals the listed 16 sets")
def test_titanic_extent_family():
    ctx = titanic_snippet()
    found = family(ctx)
    expected = {frozenset(s) for s in TITANIC_AGE_EXTENTS}
    assert found == expected, f"{len(found)} extents; extra: {sorted(map(sorted, found - expected))}"


@pytest.mark.criterion("1b", "Titanic snippet: uniform Tukey depths 2/5, 2/5, 1/5, 1/5, 2/5 exactly")
def test_titanic_depths():
    assert tukey_depths(titanic_snippet(), DiscreteMeasure.uniform(5)) == [F(2, 5), F(2, 5), F(1, 5), F(1, 5),
                                                                          F(2, 5)]


@pytest.mark.criterion("1c", "Titanic snippet: scale, enumerate and evaluate in under 1 s")
def test_titanic_runtime():
    start = time.perf_counter()
    ctx = titanic_snippet()
    all_extents(ctx)
    tukey_depths(ctx, DiscreteMeasure.uniform(5))
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion("2", "Occupation tree: 8 extents; free depth (1, 1/2, 0, 0); quasiconcave in both modes")
def test_hierarchical_golden():
    ctx = occupation_hierarchy()
    assert family(ctx) == {frozenset(s) for s in OCCUPATION_EXTENTS}
    m = DiscreteMeasure.uniform(4)
    assert HIER_FREE.values(ctx, m) == (1, F(1, 2), 0, 0)
    for mode in ("contour", "bruteforce"):
        assert check_quasiconcavity(ctx, m, HIER_FREE, mode)[0].holds


@pytest.mark.criterion("3", "Counterexample tables: outlier instability, cyclic-triple block, twin depth vectors")
def test_counterexamples():
    right = outlier_example_context()
    two, three = Sample((1, 2), 3), Sample((0, 1, 2), 3)
    assert [empirical_tukey(g, right, two) for g in (2, 1)] == [1, F(1, 2)]
    assert [empirical_tukey(g, right, three) for g in (1, 2)] == [F(2, 3), F(2, 3)]
    assert check_p10(right, three, "g1", TUKEY).fails
    blocked = detect_p8_blocked(cyclic_triangle())
    assert blocked.holds and blocked.witness["certificate"] == "cyclic-triple"
    u = DiscreteMeasure.uniform(3)
    assert tukey_depths(marginal_twins_first(), u) == tukey_depths(marginal_twins_second(), u)


@pytest.mark.criterion("4", "Oracle equivalence on 1000 random contexts, both modes, exact, under 30 s")
def test_oracle_equivalence(corpus):
    start = time.perf_counter()
    for ctx, m in corpus:
        fast = tukey_depths(ctx, m)
        for g in range(ctx.n_objects):
            assert tukey_oracle(g, ctx, m, "attr_subsets") == fast[g]
            assert tukey_oracle(g, ctx, m, "extents") == fast[g]
    assert time.perf_counter() - start < 30.0


@pytest.mark.criterion("5", "Tukey axiom suite P2-P7 and implication chain on the random corpus")
def test_tukey_axioms(corpus):
    bad = []
    for k, (ctx, m) in enumerate(corpus):
        reports = [check_p2(ctx, m, TUKEY), check_starshaped(ctx, m, TUKEY),
                   check_quasiconcavity(ctx, m, TUKEY, "both")[0]]
        reports += check_order_basics(ctx, m, TUKEY).parts
        for r in reports:
            if r.verdict not in ("holds", "premise-not-met") or (r.property in ("P2", "P5", "P6", "P7")
                                                                  and not r.holds):
                bad.append((k, r.property, r.verdict))
        _, problems = check_implication_chain(ctx, m, TUKEY)
        bad += [(k, p, "chain") for p in problems]
    assert bad == []


@pytest.mark.criterion("6", "Consistency: mean sup-gap non-increasing (noise 0.01), < 0.05 at n=4000, under 60 s")
def test_consistency():
    start = time.perf_counter()
    table = simulate_consistency(titanic_snippet(), DiscreteMeasure.uniform(5), [10, 100, 1000, 4000], 50, seed=7)
    assert table.non_increasing(0.01)
    assert table.rows[-1]["mean"] < 0.05
    assert time.perf_counter() - start < 60.0


@pytest.mark.criterion("7", "Weakly-free construction: 100 random targets reproduced exactly; worked instance")
def test_weakly_free():
    import random
    rng = random.Random(CORPUS_SEED)
    for _ in range(100):
        ctx = random_context(rng, max_objects=6, max_attributes=6)
        target = quasiconcave_target(rng, ctx)
        measure, levels, report = construct_weakly_free(ctx, target)
        assert report.holds
        lookup = dict(levels)
        assert [lookup[t] for t in tukey_depths(ctx, measure)] == target
    measure, _, report = construct_weakly_free(occupation_hierarchy(), [1, F(1, 2), 0, 0])
    assert measure.weights == (F(6, 11), F(3, 11), F(1, 11), F(1, 11))
    assert sorted(set(report.witness["tukey"]), reverse=True) == [F(8, 11), F(5, 11), F(2, 11)]
    assert report.witness["tukey"] == [F(8, 11), F(5, 11), F(2, 11), F(2, 11)]


@pytest.mark.criterion("8", "Burmeister write-read-write is byte-identical for every golden context")
def test_cxt_roundtrip():
    for name, ctx in all_golden().items():
        text = dumps_cxt(ctx)
        assert dumps_cxt(loads_cxt(text)) == text, name
