import itertools

import pytest

from oracles import even_periodic, golden_words, trace_power
from symdyn import catalog
from symdyn.blockcode import constant_code, identity_code, ledrappier_xor_code, majority_code, shift_code, xor_code
from symdyn.goe import (apply_periodic, bounded_orphan_search, collision_witness, decide, eca_codes,
                        even_shift_moore_search, goe_consistency_suite, periodic_point_count, periodic_points,
                        surjunctivity_check)
from symdyn.blockcode import NotFoundUpTo, is_preinjective_1d, is_surjective_1d
from symdyn.pattern import Pattern
from symdyn.subshift import Ledrappier, even_shift, full_shift, golden_mean


def _ledrappier_torus_brute(a, b):
    count = 0
    cells = [(i, j) for i in range(a) for j in range(b)]
    for vals in itertools.product((0, 1), repeat=a * b):
        x = dict(zip(cells, vals))
        if all(x[(i, j)] ^ x[((i + 1) % a, j)] ^ x[(i, (j + 1) % b)] == 0 for i, j in cells):
            count += 1
    return count


def test_golden_periodic_counts_are_traces():
    m = [[1, 1], [1, 0]]
    for p in range(1, 11):
        assert periodic_point_count(golden_mean(), (p,)) == trace_power(m, p)
    pts = {p.values for p in periodic_points(golden_mean(), (3,))}
    assert pts == {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)}


def test_even_shift_periodic_points():
    for p in range(1, 9):
        brute = {w for w in itertools.product((0, 1), repeat=p) if even_periodic(w)}
        assert {q.values for q in periodic_points(even_shift(), (p,))} == brute


def test_two_dimensional_periodic_counts():
    assert periodic_point_count(full_shift(2, dim=2), (2, 3)) == 2 ** 6
    for a, b in [(1, 1), (2, 2), (2, 3), (3, 3), (3, 4), (4, 4)]:
        assert periodic_point_count(Ledrappier(), (a, b)) == _ledrappier_torus_brute(a, b)


def test_apply_periodic_wraps():
    p = Pattern.word([0, 1, 1])
    assert apply_periodic(xor_code(), p, (3,)).values == (1, 0, 1)


def test_surjunctivity():
    v = surjunctivity_check(shift_code(golden_mean()), 6)
    assert v.injective_on_periodic is True
    x = surjunctivity_check(xor_code(), 4)
    assert x.injective_on_periodic is False
    assert collision_witness(x, (1,)) == ((0,), (1,))
    assert collision_witness(x, (2,)) == ((0, 0), (1, 1))
    assert surjunctivity_check(identity_code(Ledrappier()), 3).injective_on_periodic is True
    with pytest.raises(ValueError):
        surjunctivity_check(catalog.code("golden-mean-to-even"), 3)


def test_xor_collisions_match_brute_force():
    v = surjunctivity_check(xor_code(), 5)
    for p in range(1, 6):
        imgs = {}
        smallest = None
        for w in itertools.product((0, 1), repeat=p):
            y = tuple(w[i] ^ w[(i + 1) % p] for i in range(p))
            if y in imgs and (smallest is None or (imgs[y], w) < smallest):
                smallest = (imgs[y], w)
            imgs.setdefault(y, w)
        assert collision_witness(v, (p,)) == smallest


def test_decide_exact():
    v = decide(majority_code())
    assert (v.surjective, v.preinjective, v.consistency) == (False, False, "GOE-OK")
    cc = decide(catalog.code("constant-zero-constant"))
    assert cc.consistency == "MYHILL-FAILURE-EXHIBIT"
    assert decide(xor_code()).consistency == "GOE-OK"


def test_decide_bounded_two_dimensional():
    v = decide(catalog.code("constant-zero-ledrappier"), "bounded", 1, hypotheses=False)
    assert v.surjective is False and v.consistency == "MYHILL-FAILURE-EXHIBIT"
    assert v.witnesses[0]["pattern"] == {"support": [[0, 0]], "values": [1]}
    lx = decide(ledrappier_xor_code(), "bounded", 1)
    assert lx.surjective is None and lx.preinjective is None and lx.consistency == "GOE-OK"
    assert isinstance(bounded_orphan_search(ledrappier_xor_code(), 1), NotFoundUpTo)
    const2d = constant_code(full_shift(2, dim=2), 0)
    assert decide(const2d, "bounded", 1).preinjective is False


def test_eca_suite():
    suite = goe_consistency_suite(eca_codes())
    assert suite["count"] == 256 and suite["violations"] == 0
    surj = sum(1 for v in suite["verdicts"] if v["surjective"])
    assert surj == 30


def test_even_shift_moore_search():
    r = even_shift_moore_search(4)
    assert r["found"] and r["width"] == 4
    assert r["table"] == [0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0]
    code = catalog.code("identity-even-shift")
    assert is_surjective_1d(code) and is_preinjective_1d(code)


def test_catalog_suite_has_no_violations():
    ids = [e["id"] for e in catalog.listing() if e["kind"] == "code" and not e["id"].startswith("eca")]
    codes = {i: catalog.code(i) for i in ids}
    one_d = {i: c for i, c in codes.items() if c.dim == 1}
    hyps = {c.name: catalog.MYHILL_HYPOTHESES[i] for i, c in one_d.items() if i in catalog.MYHILL_HYPOTHESES}
    suite = goe_consistency_suite(list(one_d.values()), hypotheses=hyps)
    assert suite["violations"] == 0
    by_name = {v["code"]: v["consistency"] for v in suite["verdicts"]}
    assert by_name[codes["constant-zero-constant"].name] == "MYHILL-FAILURE-EXHIBIT"


def test_golden_words_oracle_sanity():
    assert len(golden_words(5)) == 13
