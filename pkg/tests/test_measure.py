from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fcadepth import (
    DimensionError, DiscreteMeasure, FcaDepthError, ObjectSet, Sample, make_measure, measure_family_diameter,
    measure_of, total_variation,
)

from golden import titanic_snippet


def test_uniform_masses():
    m = DiscreteMeasure.uniform(5)
    assert m.mass(0b10110) == Fraction(3, 5)
    assert measure_of(m, ObjectSet.full(5)) == 1


def test_weights_normalised_exactly():
    m = DiscreteMeasure.from_weights([6, 3, 1, 1])
    assert m.weights == (Fraction(6, 11), Fraction(3, 11), Fraction(1, 11), Fraction(1, 11))
    assert DiscreteMeasure.from_weights(["1/3", 0.5, 1]).weights[1] == Fraction(3, 11)


@pytest.mark.parametrize("ws", [[0, 0], [1, -1, 1]])
def test_bad_weights(ws):
    with pytest.raises(FcaDepthError):
        DiscreteMeasure.from_weights(ws)


def test_unnormalised_direct_construction_rejected():
    with pytest.raises(FcaDepthError):
        DiscreteMeasure((Fraction(1, 2), Fraction(1, 3)))


def test_empirical_measure_counts_duplicates():
    ctx = titanic_snippet()
    s = Sample.from_labels(ctx, ["g1", "g2", "g2", "g3", "g4", "g5"])
    m = make_measure("empirical", ctx, sample=s)
    assert m.weights[1] == Fraction(1, 3)
    assert s.without_position(2).counts() == [1, 1, 1, 1, 1]


def test_make_measure_errors():
    ctx = titanic_snippet()
    with pytest.raises(FcaDepthError):
        make_measure("empirical", ctx, sample=Sample((), 5))
    with pytest.raises(DimensionError):
        make_measure("explicit", ctx, weights=[1, 2])
    with pytest.raises(DimensionError):
        measure_of(DiscreteMeasure.uniform(3), ObjectSet.of(4, [0]))
    with pytest.raises(ValueError):
        make_measure("bayesian", ctx)


@given(st.lists(st.integers(0, 9), min_size=2, max_size=6).filter(any),
       st.lists(st.integers(0, 9), min_size=2, max_size=6).filter(any))
def test_total_variation_is_largest_event_gap(a, b):
    n = min(len(a), len(b))
    if not any(a[:n]) or not any(b[:n]):
        return
    p, q = DiscreteMeasure.from_weights(a[:n]), DiscreteMeasure.from_weights(b[:n])
    brute = max(abs(p.mass(e) - q.mass(e)) for e in range(1 << n))
    assert total_variation(p, q) == brute


def test_family_diameter():
    ms = [DiscreteMeasure.from_weights(w) for w in ([1, 1], [1, 3], [3, 1])]
    assert measure_family_diameter(ms) == Fraction(1, 2)
    assert measure_family_diameter(ms[:1]) == 0
