import json
import pathlib
import subprocess
import sys

import pytest

from pmk.cli import main
from pmk.cyclotomic import default_digits, gauss_sqrt, sign

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def c6(tmp_path, capsys):
    p = tmp_path / "c6.json"
    assert run(capsys, "catalog", "export", "c-sl2-6-ad", str(p))[0] == 0
    return p


def test_verify_exported_c_sl2_6(c6, capsys):
    code, out, _ = run(capsys, "verify", str(c6))
    assert code == 0 and out.rstrip().endswith("PASS")
    code, out, _ = run(capsys, "--json", "verify", str(c6))
    assert code == 0 and json.loads(out)["passed"]


def test_verify_failure_and_integrity(tmp_path, c6, capsys):
    obj = json.loads(c6.read_text())
    obj["smatrix"][1][3]["coeffs"] = [[0, "2/1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out, err = run(capsys, "verify", str(bad))
    assert code == 1 and "label 1" in err and out == ""


def test_verify_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2 and "no such file" in err
    junk = tmp_path / "junk.json"
    junk.write_text("{\n  nope")
    code, _, err = run(capsys, "verify", str(junk))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys)
    assert code == 2
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "invalid choice" in err


def test_indicator_ty_like(capsys):
    f = str(FIXTURES / "ty_like.json")
    code, out, _ = run(capsys, "indicator", f)
    assert code == 1 and "non-integer first sum at object 3" in out
    code, out, _ = run(capsys, "indicator", f, "--object", "1")
    assert code == 0
    code, out, _ = run(capsys, "indicator", f, "--json")
    assert code == 1 and json.loads(out)["failing"] == [3]
    code, _, err = run(capsys, "indicator", f, "--object", "9")
    assert code == 2 and "out of range" in err


def test_indicator_prints_exact_and_float(c6, capsys):
    code, out, _ = run(capsys, "indicator", str(c6))
    assert code == 0 and "(~" in out


def test_galois(tmp_path, c6, capsys):
    p = tmp_path / "fib.json"
    run(capsys, "catalog", "export", "a1-7-half", str(p))
    code, out, _ = run(capsys, "galois", str(p))
    assert code == 0 and "order 3" in out
    code, out, _ = run(capsys, "galois", str(p), "--json")
    assert json.loads(out)["group"]["order"] == 3
    code, _, err = run(capsys, "galois", str(c6))
    assert code == 2 and "modular" in err


def test_catalog_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "c-so5-10-ad" in out
    code, out, _ = run(capsys, "catalog", "show", "fib")
    assert code == 0 and "theta_1" in out
    code, out, _ = run(capsys, "--json", "catalog", "show", "fib")
    assert json.loads(out)["datum"]["format"] == "premodular-datum/1"
    code, _, err = run(capsys, "catalog", "show", "nope")
    assert code == 2 and "available" in err
    code, _, err = run(capsys, "catalog", "show")
    assert code == 2
    code, _, err = run(capsys, "catalog", "export", "fib")
    assert code == 2
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "catalog", "export", "fib-x-fib", str(p1))
    run(capsys, "catalog", "export", "fib-x-fib", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_self_test(capsys):
    code, out, _ = run(capsys, "self-test")
    assert code == 0 and "entries pass" in out


def test_rank5_filter(capsys):
    code, out, _ = run(capsys, "rank5-filter")
    assert code == 0 and "conclusion: pointed" in out


def test_replays(capsys):
    code, out, _ = run(capsys, "replay", "case21")
    assert code == 0 and out.splitlines()[0] == "446 / 24 / 0"
    code, out, _ = run(capsys, "replay", "case12")
    assert code == 0 and out.splitlines()[0] == "48 / 12 / 6 / 4"
    code, out, _ = run(capsys, "replay", "final-z2", "--json")
    assert code == 0 and json.loads(out)["allowed_N"] == [-1, 0, 1]
    code, _, err = run(capsys, "replay", "case99")
    assert code == 2


def test_classify_usage(capsys):
    assert run(capsys, "classify", "--rank", "5")[0] == 2
    assert run(capsys, "classify", "--rank", "4", "--nmax", "1")[0] == 2
    assert run(capsys, "classify", "--rank", "4", "--workers", "0")[0] == 2
    assert run(capsys, "classify")[0] == 2


def test_classify_writes_report(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", "--rank", "4", "--nmax", "2", "--out", str(tmp_path))
    assert code == 0 and "theorem list reproduced: yes" in out
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["format"] == "classification-report/1"
    assert rep["theorem_check"]["ok"]


def test_pmk_digits(monkeypatch):
    monkeypatch.setenv("PMK_DIGITS", "200")
    assert default_digits() == 200
    assert sign(gauss_sqrt(2) - 1) == 1


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "pmk.cli", "catalog", "show", "nope"],
                       capture_output=True, text=True)
    assert r.returncode == 2 and r.stdout == "" and "unknown catalog entry" in r.stderr
