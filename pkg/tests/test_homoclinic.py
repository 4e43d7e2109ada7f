import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from oracles import even_periodic
from symdyn.blockcode import golden_mean_to_even, xor_code
from symdyn.catalog import at_most_one_one, constant_subshift
from symdyn.homoclinic import (DescribedConfig, almost_equal, apply_code, class_census, class_members,
                               ledrappier_finite_support_kernel, member_1d, phi_n_family, wz_family)
from symdyn.lattice import Shape, box, interval
from symdyn.pattern import Pattern
from symdyn.subshift import (Counterexample, HoldsUpTo, Ledrappier, PreconditionError, even_shift, full_shift,
                             golden_mean)


def _golden_census_brute(f_lo, f_hi):
    """Words on [f_lo, f_hi] that keep 0^inf free of 11 when written into it."""
    n = f_hi - f_lo + 1
    return [w for w in itertools.product((0, 1), repeat=n) if "11" not in "0" + "".join(map(str, w)) + "0"]


def test_described_config():
    u = DescribedConfig.periodic([0, 1], Pattern.word([1], start=4))
    assert [u[(i,)] for i in range(6)] == [0, 1, 0, 1, 1, 1]
    assert u.background_at((-1,)) == 1
    with pytest.raises(ValueError):
        DescribedConfig((2,), (0,))


def test_almost_equal():
    z = DescribedConfig.constant(0)
    u = z.with_patch(Pattern.word([1, 0, 1], start=3))
    r = almost_equal(z, u)
    assert r and r.difference == Shape.of([3, 5])
    assert almost_equal(u, u).difference == Shape.empty(1)
    far = almost_equal(z, DescribedConfig.periodic([0, 1]))
    assert not far and far.certificate_period == (2,) and far.certificate_cell == (1,)
    # equal backgrounds written with different periods are still almost equal
    assert almost_equal(DescribedConfig.periodic([0, 0]), z)


def test_apply_code_keeps_finite_difference():
    z = DescribedConfig.constant(0)
    u = z.with_patch(Pattern.word([1], start=0))
    img = apply_code(xor_code(), u)
    assert [img[(i,)] for i in range(-2, 3)] == [0, 1, 1, 0, 0]
    assert almost_equal(apply_code(xor_code(), z), img).difference == Shape.of([-1, 0])


def test_membership():
    gm = golden_mean()
    z = DescribedConfig.constant(0)
    assert member_1d(gm, z.with_patch(Pattern.word([1, 0, 1])))
    assert not member_1d(gm, z.with_patch(Pattern.word([1, 1])))
    assert not member_1d(gm, DescribedConfig.constant(1))
    ev = even_shift()
    assert member_1d(ev, DescribedConfig.constant(1))
    assert member_1d(ev, z.with_patch(Pattern.word([1, 1])))
    assert not member_1d(ev, z.with_patch(Pattern.word([1, 1, 1])))
    for w in itertools.product((0, 1), repeat=5):
        assert member_1d(ev, DescribedConfig.periodic(list(w))) == even_periodic(w)


def test_census_matches_brute_force():
    gm = golden_mean()
    z = DescribedConfig.constant(0)
    sample = class_census(gm, z, interval(0, 3), interval(0, 1))
    assert sample.size == 8 == len(_golden_census_brute(0, 3))
    assert sample.lower_bound == 5 and sample.bound_satisfied
    # the ordered-apartness check refutes {0,1}-irreducibility
    assert isinstance(sample.hypothesis, Counterexample)
    sizes = [class_census(gm, z, box(n), interval(0, 1)).size for n in range(8)]
    assert sizes == [2, 5, 13, 34, 89, 233, 610, 1597]
    symmetric = class_census(gm, z, interval(0, 3), box(1))
    assert isinstance(symmetric.hypothesis, HoldsUpTo) and symmetric.lower_bound == 3


def test_census_other_systems():
    z = DescribedConfig.constant(0)
    for n in range(0, 5):
        assert class_census(at_most_one_one(), z, interval(0, n), interval(0, 1)).size == n + 2
    assert class_census(full_shift(2), z, Shape.of([0]), Shape.of([0])).size == 2
    assert class_census(constant_subshift(2), z, interval(0, 3), Shape.of([0])).size == 1
    with pytest.raises(PreconditionError):
        class_census(golden_mean(), DescribedConfig.constant(1), interval(0, 1), Shape.of([0]))


def test_census_two_dimensional():
    z = DescribedConfig.constant(0, dim=2)
    assert class_census(full_shift(2, dim=2), z, box(1, 2), box(0, 2)).size == 2 ** 9
    led = class_members(Ledrappier(), z, box(1, 2))
    assert [m.values for m in led] == [(0,) * 9]


def test_ledrappier_kernel():
    assert [ledrappier_finite_support_kernel(n) for n in range(1, 13)] == [0] * 12
    assert ledrappier_finite_support_kernel(3, relations=False) > 0


def test_wz_family():
    fam = wz_family(golden_mean(), Pattern.word([0]), Pattern.word([1]), DescribedConfig.constant(0),
                    interval(0, 24))
    assert fam.count == 32 and fam.centers == Shape.of([2, 7, 12, 17, 22])
    assert abs(fam.entropy_bound - math.log(2) / 5) < 1e-12
    assert abs(fam.density_bound - math.log(2) / 10) < 1e-12
    assert fam.entropy_bound <= math.log((1 + math.sqrt(5)) / 2)
    with pytest.raises(PreconditionError):
        wz_family(golden_mean(), Pattern.word([0]), Pattern.word([0]), DescribedConfig.constant(0), interval(0, 9))
    with pytest.raises(PreconditionError):
        wz_family(golden_mean(), Pattern.word([0]), Pattern.word([1]), DescribedConfig.constant(1), interval(0, 9))


def test_wz_family_by_brute_force():
    fam = wz_family(golden_mean(), Pattern.word([0]), Pattern.word([1]), DescribedConfig.constant(0),
                    interval(0, 9))
    words = {p.values for p in fam.patterns}
    expected = {tuple(1 if i in (2, 7) and bits[(2, 7).index(i)] else 0 for i in range(10))
                for bits in itertools.product((0, 1), repeat=2)}
    assert words == expected


def test_phi_family():
    gm = golden_mean()
    z = DescribedConfig.constant(0)
    r = phi_n_family(gm, z, 2, interval(0, 1))
    assert (r.count, r.lower_bound) == (34, 13) and r.hypothesis_met
    assert phi_n_family(full_shift(2), z, 1, Shape.of([0])).count == 8
    ao = phi_n_family(at_most_one_one(), z, 1, Shape.of([0]))
    assert ao.count == 4 and not ao.hypothesis_met


def test_factor_preserves_homoclinicity_example():
    c = golden_mean_to_even()
    z = DescribedConfig.constant(0)
    u = z.with_patch(Pattern.word([1, 0, 1], start=2))
    assert member_1d(c.source, u)
    assert almost_equal(apply_code(c, z), apply_code(c, u))
    assert member_1d(c.target, apply_code(c, u))


patches = st.dictionaries(st.integers(-6, 6), st.integers(0, 1), max_size=5)


def _cfg(bg, patch):
    return DescribedConfig.periodic(bg, Pattern.from_mapping({(k,): v for k, v in patch.items()}))


backgrounds = st.sampled_from([[0], [1], [0, 1], [0, 0, 1]])


@given(backgrounds, patches, backgrounds, patches, backgrounds, patches)
@settings(max_examples=80)
def test_almost_equal_is_an_equivalence(b1, p1, b2, p2, b3, p3):
    u, v, w = _cfg(b1, p1), _cfg(b2, p2), _cfg(b3, p3)
    assert almost_equal(u, u)
    assert bool(almost_equal(u, v)) == bool(almost_equal(v, u))
    if almost_equal(u, v) and almost_equal(v, w):
        assert almost_equal(u, w)


@given(backgrounds, patches, patches, st.integers(0, 255))
@settings(max_examples=80)
def test_codes_preserve_almost_equality(bg, p1, p2, rule):
    from symdyn.blockcode import block_code, eca_rule
    full = full_shift(2)
    c = block_code(eca_rule(rule), full, full, check=False)
    u, v = _cfg(bg, p1), _cfg(bg, p2)
    r = almost_equal(u, v)
    img = almost_equal(apply_code(c, u), apply_code(c, v))
    assert img
    # differences can only spread by the neighborhood radius
    spread = {(g[0] + k,) for g in r.difference for k in (-1, 0, 1)}
    assert set(img.difference) <= spread


def test_almost_equal_periodic_background():
    base = DescribedConfig.periodic([0, 1])
    u = base.with_patch(Pattern.word([1, 1], start=4))
    v = base.with_patch(Pattern.word([1, 0], start=4))
    r = almost_equal(u, v)
    assert r and set(r.difference) <= {(4,), (5,)}
    assert not almost_equal(DescribedConfig.constant(0), DescribedConfig.constant(1))
