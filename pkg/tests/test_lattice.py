import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from symdyn.budget import Budget, BudgetExceeded, default_budget
from symdyn.lattice import (DimensionError, Shape, box, boundary_shape, cube, erode, folner_defect, growth_ratio,
                            interval, is_delta_apart, make_tiling, rect, shape_sum)

points1 = st.integers(-6, 6).map(lambda x: (x,))
shapes1 = st.lists(points1, min_size=1, max_size=6).map(lambda ps: Shape.of(ps, 1))
points2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
shapes2 = st.lists(points2, min_size=1, max_size=5).map(lambda ps: Shape.of(ps, 2))


def test_box_and_cube():
    assert len(box(3)) == 7 and box(3).is_symmetric()
    assert len(box(2, 2)) == 25
    assert cube(3, 2).bounding_box() == ((0, 0), (2, 2))
    assert interval(0, 3) == rect((0,), (3,))
    assert set(box(1, 2)) <= set(box(2, 2))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        shape_sum(box(1), box(1, 2))


def test_delta_apart_is_ordered():
    # {1} + {0,1} misses {0}, but {0} + {0,1} hits {1}
    d = interval(0, 1)
    assert is_delta_apart(Shape.of([1]), Shape.of([0]), d)
    assert not is_delta_apart(Shape.of([0]), Shape.of([1]), d)


def test_folner_defect_values():
    e = interval(0, 1)
    for n in range(1, 15):
        assert folner_defect(box(n), e) == Fraction(1, 2 * n + 1)
    assert growth_ratio(box(10), e) == Fraction(22, 21)
    assert folner_defect(box(3, 2), cube(2, 2)) == Fraction(15, 49)


def test_boundary_and_erode():
    assert boundary_shape(interval(0, 2), box(1)) == Shape.of([-2, -1, 3, 4])
    assert erode(interval(0, 3), interval(0, 1)) == interval(0, 2)
    assert erode(box(2, 2), box(1, 2)) == box(1, 2)
    with pytest.raises(ValueError):
        boundary_shape(interval(0, 2), interval(0, 1))


def test_tiling_centers():
    t = make_tiling(interval(-2, 2))
    assert t.periods == (5,)
    assert t.density == Fraction(1, 10)
    assert t.tile_centers_in(interval(0, 24)) == Shape.of([2, 7, 12, 17, 22])
    t2 = make_tiling(box(1, 2))
    assert t2.tiles_disjoint_within(box(6, 2))
    assert len(t2.tile_centers_in(cube(9, 2))) == 9


def test_budget():
    b = Budget(max_patterns=10)
    b.check_patterns(10)
    with pytest.raises(BudgetExceeded):
        b.check_patterns(11)
    with pytest.raises(ValueError):
        Budget.profile("nope")
    assert Budget.profile("small").max_patterns == 2 ** 16


def test_budget_env(monkeypatch):
    monkeypatch.setenv("SYMDYN_BUDGET", "small")
    assert default_budget().max_patterns == 2 ** 16


@given(shapes1, shapes1)
def test_shape_sum_commutes(a, b):
    assert shape_sum(a, b) == shape_sum(b, a)


@given(shapes2, shapes2, shapes2)
@settings(max_examples=50)
def test_shape_sum_associates(a, b, c):
    assert shape_sum(shape_sum(a, b), c) == shape_sum(a, shape_sum(b, c))


@given(shapes1, shapes1, shapes1)
def test_delta_apart_matches_definition(a, b, d):
    brute = all((p[0] + q[0],) not in b for p in a for q in d)
    assert is_delta_apart(a, b, d) == brute
    # ordered apartness of (a, b) under d equals that of (b, a) under -d
    assert is_delta_apart(a, b, d) == is_delta_apart(b, a, d.negate())


@given(st.integers(1, 12), shapes1)
def test_defect_bounds(n, e):
    f = box(n)
    defect = folner_defect(f, e)
    assert 0 <= defect <= len(e)
    # each translate f + x adds at most min(|x|, |f|) new cells
    assert defect <= Fraction(sum(min(abs(x[0]), len(f)) for x in e), len(f))


@given(shapes1, shapes1)
def test_erode_is_largest(f, d):
    core = erode(f, d)
    assert set(shape_sum(core, d)) <= set(f) if core else True
    lo, hi = f.bounding_box()
    for g in range(lo[0] - 13, hi[0] + 13):
        if all((g + x[0],) in f for x in d):
            assert (g,) in core


@given(st.integers(0, 3), st.integers(0, 3))
def test_box_nesting(n, k):
    assert set(box(n, 2)) <= set(box(n + k, 2))
    assert len(list(itertools.product(range(-n, n + 1), repeat=2))) == len(box(n, 2))
