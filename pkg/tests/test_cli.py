import hashlib
import json
import subprocess
import sys

import pytest

from symdyn.cli import main, parse_shape, parse_symbols, run, UsageError
from symdyn.lattice import Shape, box, interval, rect


def _report(argv):
    status, text = run(argv)
    return status, json.loads(text)


def test_parse_helpers():
    assert parse_shape("0:3") == interval(0, 3)
    assert parse_shape("box:1", 2) == box(1, 2)
    assert parse_shape("0,1") == Shape.of([0, 1])
    assert parse_shape("0,0;1,0", 2) == Shape.of([(0, 0), (1, 0)], 2)
    assert parse_shape("rect:0,0:1,2", 2) == rect((0, 0), (1, 2))
    with pytest.raises(UsageError):
        parse_shape("a:b")
    with pytest.raises(UsageError):
        parse_shape("0,0,0", 2)
    assert parse_symbols("0110") == (0, 1, 1, 0)
    assert parse_symbols("a,b") == ("a", "b")


def test_entropy_command():
    status, doc = _report(["entropy", "--system", "golden-mean", "--mode", "global1d", "--n", "12"])
    assert status == 0
    rows = doc["report"]["outputs"]["rows"]
    assert len(rows) == 12 and rows[-1]["estimate"] == 0.48752
    assert doc["report"]["experiment"] == "entropy" and doc["report"]["schema"] == 1
    body = json.dumps(doc["report"], sort_keys=True, indent=2, default=str)
    assert doc["envelope"]["report_sha256"] == hashlib.sha256(body.encode()).hexdigest()


def test_entropy_csv():
    status, text = run(["entropy", "--system", "full-binary", "--n", "3", "--format", "csv"])
    assert status == 0 and text.splitlines()[0] == "n,size,count,estimate"


def test_reports_are_deterministic():
    argv = ["--no-envelope", "decide", "--code", "majority"]
    assert run(argv) == run(argv)
    a = json.loads(run(["goe-suite", "--family", "eca"])[1])
    b = json.loads(run(["goe-suite", "--family", "eca"])[1])
    assert a["report"] == b["report"]
    assert a["envelope"]["report_sha256"] == b["envelope"]["report_sha256"]


def test_decide_command():
    status, doc = _report(["decide", "--rule", "eca:204", "--bounded-to-one", "3"])
    out = doc["report"]["outputs"]
    assert status == 0 and out["surjective"] and out["preinjective"]
    status, doc = _report(["decide", "--code", "golden-mean-to-even", "--bounded-to-one", "10",
                           "--factor-entropy", "8"])
    out = doc["report"]["outputs"]
    assert out["bounded_to_one"]["K_estimate"] == 2 and out["factor_entropy"]["holds"]
    _, doc = _report(["decide", "--code", "constant-zero-constant"])
    assert doc["report"]["outputs"]["consistency"] == "MYHILL-FAILURE-EXHIBIT"


def test_goe_suite_command():
    status, doc = _report(["goe-suite", "--family", "eca"])
    out = doc["report"]["outputs"]
    assert status == 0 and out["count"] == 256 and out["violations"] == 0
    _, doc = _report(["goe-suite", "--family", "catalog"])
    assert doc["report"]["outputs"]["violations"] == 0


def test_homoclinic_commands():
    _, doc = _report(["homoclinic", "census", "--window", "0:3", "--delta", "0,1"])
    assert doc["report"]["outputs"]["size"] == 8
    _, doc = _report(["homoclinic", "ledrappier-kernel", "--n", "6"])
    assert [r["dimension"] for r in doc["report"]["outputs"]["rows"]] == [0] * 6
    _, doc = _report(["homoclinic", "wz", "--window", "0:24"])
    assert doc["report"]["outputs"]["count"] == 32
    _, doc = _report(["homoclinic", "phi", "--n", "2", "--delta", "0,1"])
    assert doc["report"]["outputs"]["count"] == 34


def test_periodic_and_surjunctive():
    _, doc = _report(["periodic", "--system", "golden-mean", "--periods", "5"])
    assert doc["report"]["outputs"]["count"] == 11
    _, doc = _report(["surjunctive", "--code", "xor", "--p-max", "3"])
    assert doc["report"]["outputs"]["injective_on_periodic"] is False


def test_irreducible_command():
    _, doc = _report(["irreducible", "--system", "golden-mean"])
    assert doc["report"]["outputs"]["smallest_radius"] == 1
    _, doc = _report(["irreducible", "--system", "golden-mean", "--delta", "0,1"])
    assert doc["report"]["outputs"]["verdict"]["verdict"] == "Counterexample"


def test_catalog_command():
    _, doc = _report(["catalog", "verify"])
    assert doc["report"]["outputs"]["failures"] == 0
    _, doc = _report(["catalog", "show", "even-shift"])
    assert doc["report"]["outputs"]["type"] == "Sofic1d"


def test_error_exit_codes(tmp_path):
    assert run(["entropy", "--system", "nope"])[0] == 2
    assert run(["entropy", "--system", "ledrappier", "--mode", "global1d"])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["entropy", "--system", str(bad)])[0] == 2
    assert run(["homoclinic", "wz", "--u1", "0"])[0] == 2
    status, text = run(["--max-seconds", "0", "entropy", "--system", "golden-mean", "--n", "6"])
    assert status == 3


def test_file_inputs(tmp_path):
    sft = tmp_path / "gm.json"
    sft.write_text(json.dumps({"dimension": 1, "alphabet": [0, 1], "window": [[0], [1]], "forbidden": [[1, 1]]}))
    rule = tmp_path / "xor.json"
    rule.write_text(json.dumps({"neighborhood": [[0], [1]], "table": [0, 1, 1, 0], "alphabet": [0, 1]}))
    status, doc = _report(["entropy", "--system", str(sft), "--mode", "global1d", "--n", "3"])
    assert status == 0 and doc["report"]["outputs"]["rows"][0]["count"] == "5"
    status, doc = _report(["decide", "--rule", str(rule)])
    assert doc["report"]["outputs"]["surjective"] is True


def test_main_writes_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["--out", str(out), "catalog", "list"]) == 0
    assert json.loads(out.read_text())["report"]["experiment"] == "catalog"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symdyn.cli", "--no-envelope", "periodic", "--system",
                           "golden-mean", "--periods", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["outputs"]["count"] == 4
