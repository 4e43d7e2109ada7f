import csv
import io
import json
import math

import pytest

from oracles import golden_words
from symdyn.blockcode import golden_mean_to_even, xor_code
from symdyn.catalog import aa_ab, at_most_one_one, zero_point
from symdyn.entropy import (EMPTY, entropy_estimate, entropy_exact_1d, factor_entropy_check,
                            strict_monotonicity_probe)
from symdyn.lattice import DimensionError
from symdyn.subshift import Ledrappier, PreconditionError, even_shift, full_shift, golden_mean, sft_from_words

LN_PHI = math.log((1 + math.sqrt(5)) / 2)


def test_golden_table_rows():
    t = entropy_estimate(golden_mean(), 12, "global1d")
    assert [r.count for r in t.rows[:7]] == [len(golden_words(2 * n + 1)) for n in range(1, 8)]
    assert t.rows[9].count == 28657 and t.rows[11].count == 196418
    assert round(t.rows[-1].estimate, 6) == 0.48752
    assert t.tag == "exact" and not t.truncated


def test_full_shift_rows_are_exact():
    for k in (2, 3):
        t = entropy_estimate(full_shift(k), 8)
        assert all(e == math.log(k) for e in t.estimates)
    t2 = entropy_estimate(full_shift(2, dim=2), 3)
    assert all(e == math.log(2) for e in t2.estimates)


def test_exact_values():
    assert abs(entropy_exact_1d(golden_mean()) - LN_PHI) < 1e-12
    assert abs(entropy_exact_1d(even_shift()) - LN_PHI) < 1e-12
    assert abs(entropy_exact_1d(full_shift(3)) - math.log(3)) < 1e-12
    assert abs(entropy_exact_1d(aa_ab())) < 1e-12
    assert abs(entropy_exact_1d(at_most_one_one())) < 1e-12
    empty = sft_from_words((0, 1), [(0,), (1,)], "empty")
    assert entropy_exact_1d(empty) is EMPTY
    with pytest.raises(DimensionError):
        entropy_exact_1d(Ledrappier())


def test_ledrappier_cube_schedule():
    t = entropy_estimate(Ledrappier(), 8, "local", "cube")
    assert [r.count for r in t.rows] == [2 ** (2 * n - 1) for n in range(1, 9)]
    assert round(t.rows[-1].estimate, 6) == 0.162456


def test_toroidal_mode():
    t = entropy_estimate(golden_mean(), 4, "toroidal")
    # Lucas numbers at periods 3, 5, 7, 9
    assert [r.count for r in t.rows] == [4, 11, 29, 76]
    assert t.tag == "periodic"


def test_local_mode_tag_and_upper_bound():
    t = entropy_estimate(aa_ab(), 3, "local")
    g = entropy_estimate(aa_ab(), 3, "global1d")
    assert all(a >= b for a, b in zip(t.estimates, g.estimates))


def test_serializations():
    t = entropy_estimate(golden_mean(), 3, "global1d")
    data = json.loads(t.dumps())
    assert data["rows"][0] == {"n": 1, "size": 3, "count": "5", "estimate": round(math.log(5) / 3, 6)}
    rows = list(csv.reader(io.StringIO(t.to_csv())))
    assert rows[0] == ["n", "size", "count", "estimate"] and len(rows) == 4
    assert t.plot_data().splitlines()[0].startswith("1 ")


def test_bad_arguments():
    with pytest.raises(ValueError):
        entropy_estimate(golden_mean(), 3, "nope")
    with pytest.raises(ValueError):
        entropy_estimate(golden_mean(), 0)
    with pytest.raises(DimensionError):
        entropy_estimate(Ledrappier(), 2, "global1d")


def test_monotonicity_probe():
    r = strict_monotonicity_probe(full_shift(2), golden_mean(), 10)
    assert r.holds and len(r.gaps) == 10
    r2 = strict_monotonicity_probe(golden_mean(), zero_point(), 10)
    assert r2.holds
    with pytest.raises(PreconditionError):
        strict_monotonicity_probe(full_shift(2), full_shift(2), 4)
    with pytest.raises(PreconditionError):
        strict_monotonicity_probe(golden_mean(), full_shift(2), 4)


def test_factor_entropy():
    r = factor_entropy_check(golden_mean_to_even(), 10)
    assert r.holds
    assert abs(r.source_entropy - r.image_entropy) < 1e-9
    # same-length comparison would fail: 4 image words of length 2 against 3 source words
    assert r.rows[1]["image_count"] == 4
    assert r.rows[0]["source_count"] == 3
    x = factor_entropy_check(xor_code(), 6)
    assert x.holds and abs(x.image_entropy - math.log(2)) < 1e-12
