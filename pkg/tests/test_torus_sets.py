from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsol import DiscreteSet, IntervalUnion, from_discrete, sets_from_json, sets_to_json
from torsol.errors import GridAlignmentError, InvalidInputError


def iv(*pairs):
    return IntervalUnion([(F(a), F(b)) for a, b in pairs])


@st.composite
def interval_unions(draw, max_parts=4, max_den=24):
    parts = []
    for _ in range(draw(st.integers(0, max_parts))):
        den = draw(st.integers(1, max_den))
        a = draw(st.integers(0, den - 1))
        b = draw(st.integers(a + 1, den))
        parts.append((F(a, den), F(b, den)))
    return IntervalUnion(parts)


def test_normalization_merges_and_sorts():
    a = IntervalUnion([(F(1, 4), F(1, 2)), (F(0), F(1, 4))])
    assert a.intervals == ((F(0), F(1, 2)),)
    b = IntervalUnion([(F(0), F(1, 3)), (F(1, 4), F(1, 2))])
    assert b.intervals == ((F(0), F(1, 2)),)


def test_measure_examples():
    assert iv((0, F(1, 2))).measure() == F(1, 2)
    assert IntervalUnion.full().measure() == 1
    assert IntervalUnion.empty().measure() == 0


def test_symmetric_difference_example():
    a = iv((0, F(1, 3)))
    b = iv((0, F(2, 7)))
    d = a.symmetric_difference(b)
    assert d.intervals == ((F(2, 7), F(1, 3)),)
    assert d.measure() == F(1, 21)


def test_shift_wraparound_example():
    a = iv((F(5, 6), 1), (0, F(1, 6)))
    assert a.shift(F(1, 6)).intervals == ((F(0), F(1, 3)),)


def test_bad_interval_rejected():
    with pytest.raises(InvalidInputError):
        IntervalUnion([(F(1, 2), F(1, 4))])
    with pytest.raises(InvalidInputError):
        IntervalUnion([(F(-1, 4), F(1, 4))])


def test_snap_examples():
    a = iv((0, F(1, 3)))
    s = a.snap_to_grid(7)
    assert s.intervals == ((F(0), F(2, 7)),)
    assert a.symmetric_difference(s).measure() == F(1, 21)

    b = iv((0, F(1, 2)))
    assert b.snap_to_grid(10) == b

    c = iv((F(1, 7), F(2, 7)))
    s = c.snap_to_grid(3)
    assert s.is_empty()
    assert c.symmetric_difference(s).measure() == F(1, 7)


def test_to_discrete_examples():
    assert iv((0, F(2, 5))).to_discrete(5).indices() == [0, 1]
    assert IntervalUnion.full().to_discrete(7).indices() == list(range(7))
    assert iv((F(1, 5), F(2, 5)), (F(4, 5), 1)).to_discrete(5).indices() == [1, 4]


def test_to_discrete_rejects_misaligned():
    with pytest.raises(GridAlignmentError, match="1/3"):
        iv((0, F(1, 3))).to_discrete(5)


def test_density_points_examples():
    a = IntervalUnion([(F(0), F(1, 4)), (F(1, 4), F(1, 2))])
    assert a.density_points() == [(F(0), F(1, 2))]
    assert iv((F(1, 3), F(2, 3))).density_points() == [(F(1, 3), F(2, 3))]
    wrap = iv((F(5, 6), 1), (0, F(1, 6)))
    assert wrap.density_points() == [(F(5, 6), F(7, 6))]
    assert IntervalUnion.full().density_points() == [(F(0), F(1))]
    assert IntervalUnion.empty().density_points() == []


def test_density_points_measure_preserved():
    a = iv((0, F(1, 8)), (F(1, 4), F(3, 8)), (F(7, 8), 1))
    total = sum(b - x for x, b in a.density_points())
    assert total == a.measure()


@settings(max_examples=120, deadline=None)
@given(interval_unions())
def test_complement_measure(a):
    assert a.measure() + a.complement().measure() == 1
    assert a.complement().complement() == a


@settings(max_examples=120, deadline=None)
@given(interval_unions(), interval_unions())
def test_symdiff_inclusion_exclusion(a, b):
    expected = a.measure() + b.measure() - 2 * a.intersect(b).measure()
    assert a.symmetric_difference(b).measure() == expected


@settings(max_examples=120, deadline=None)
@given(interval_unions(), st.integers(-40, 40), st.integers(1, 24))
def test_shift_preserves_measure(a, num, den):
    t = F(num, den)
    assert a.shift(t).measure() == a.measure()
    assert a.shift(t).shift(-t) == a


@settings(max_examples=120, deadline=None)
@given(interval_unions(), st.integers(1, 40))
def test_snap_bound_and_inner(a, n):
    s = a.snap_to_grid(n)
    assert s.is_grid_aligned(n)
    assert s.intersect(a) == s  # inner approximation
    assert a.symmetric_difference(s).measure() <= F(2 * len(a.intervals), n)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.lists(st.integers(0, 29), max_size=12))
def test_discrete_roundtrip(p, idx):
    d = DiscreteSet.from_indices(p, [x % p for x in idx])
    assert from_discrete(d).to_discrete(p) == d
    # p-grid-aligned interval unions roundtrip the other way
    a = from_discrete(d)
    assert a.to_discrete(p).to_interval_union() == a


def test_union_intersect_basic():
    a = iv((0, F(1, 2)))
    b = iv((F(1, 4), F(3, 4)))
    assert a.union(b).intervals == ((F(0), F(3, 4)),)
    assert a.intersect(b).intervals == ((F(1, 4), F(1, 2)),)


def test_contains():
    a = iv((F(1, 4), F(1, 2)))
    assert a.contains(F(1, 4))
    assert not a.contains(F(1, 2))
    assert not a.contains(F(3, 4))


def test_sets_json_roundtrip():
    sets = [iv((0, F(1, 2))), iv((F(1, 3), F(2, 3)), (F(5, 6), 1))]
    data = sets_to_json(sets)
    assert data[0] == [["0", "1/2"]]
    assert sets_from_json(data) == sets
    with pytest.raises(InvalidInputError):
        sets_from_json([[["oops", "1/2"]]])
