import csv
import io
import json
import subprocess
import sys

import pytest

from besseline.cli import fmt_float, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, _ = run(argv + ["--format", "json"], capsys)
    return code, json.loads(out)


def test_eval_bessel_k_half(capsys):
    code, out, _ = run(["eval", "bessel", "--kind", "K", "--nu", "0.5", "--x", "1"], capsys)
    assert code == 0
    assert out.startswith("0.4610685044")


def test_eval_json_schema(capsys):
    code, doc = run_json(["eval", "gamma", "--u", "0.5"], capsys)
    assert code == 0
    assert list(doc) == ["command", "params", "results", "warnings", "version"]
    assert doc["results"][0]["value"] == 1.772453851


def test_cnun(capsys):
    code, doc = run_json(["constants", "cnun", "--nu", "10", "--n", "0"], capsys)
    assert code == 0
    assert abs(doc["results"][0]["c_value"] - 3.670) <= 2e-3


def test_tables(capsys):
    code, doc = run_json(["tables", "corollary", "--nus", "1", "--xs", "5"], capsys)
    row = doc["results"][0]
    assert code == 0
    assert round(row["relerr_L"], 4) == 0.2359 and round(row["relerr_U"], 4) == 0.2038


def test_tables_csv(capsys):
    code, out, _ = run(["tables", "corollary", "--nus", "1,5", "--xs", "0.5,5", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4 and set(rows[0]) >= {"nu", "x", "relerr_L", "relerr_U"}


def test_verify_exit_zero(capsys):
    code, out, _ = run(["verify", "--ineq", "BK2", "--grid", "default", "--tol", "1e-9"], capsys)
    assert code == 0
    assert "BK2" in out and "0 violations" in out


def test_verify_exit_one_on_violation(capsys):
    code, doc = run_json(["verify", "--ineq", "LEM_A1", "--nus", "1", "--ns", "0.9", "--xs", "0.1:5:4"], capsys)
    assert code == 1
    assert doc["results"]


def test_verify_all_quick(capsys):
    code, out, _ = run(["verify", "--ineq", "all", "--grid", "quick", "--nus", "0,2.5", "--ns", "0,0.5"], capsys)
    assert code == 0
    assert "BI8" in out and "NASELL_RATIO" in out


def test_domain_error_exit_three(capsys):
    code, _, err = run(["bounds", "--ineq", "BK1", "--nu", "2.5", "--n", "0", "--x", "1"], capsys)
    assert code == 3
    assert "nu > 5/2 - 2n" in err


def test_overflow_exit_three(capsys):
    code, _, err = run(["eval", "bessel", "--kind", "I", "--nu", "0", "--x", "800"], capsys)
    assert code == 3 and "overflow" in err


@pytest.mark.parametrize("argv", [
    ["eval", "bessel", "--kind", "J", "--nu", "1", "--x", "1"],
    ["eval", "bessel", "--kind", "K", "--nu", "abc", "--x", "1"],
    ["verify", "--ineq", "BK1", "--xs", "1:0"],
    ["bounds", "--ineq", "BK99", "--nu", "1", "--x", "1"],
    [],
])
def test_bad_flags_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "usage" in err


def test_conjecture_exploratory(capsys):
    code, out, _ = run(["conjecture", "--nu", "4", "--n", "0"], capsys)
    assert code == 0
    assert "EXPLORATORY" in out


def test_conjecture_probe_does_not_fail(capsys):
    code, doc = run_json(["conjecture", "--nu", "4", "--n", "0", "--probe", "0.1"], capsys)
    # exploratory negatives never change the exit code
    assert code == 0
    assert doc["results"][0]["violations"] == []
    assert doc["results"][1]["violations"]


def test_json_determinism(capsys):
    argv = ["verify", "--ineq", "BI3", "--nus", "0,1", "--ns", "0", "--xs", "0.01:20:6", "--format", "json"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["eval", "integral", "--family", "K", "--nu", "1", "--n", "1", "--x", "1",
                        "--format", "json", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"][0]["value"] == 0.6019072302


def test_float_formatting():
    assert fmt_float(0.46106850444789454) == 0.4610685044
    assert fmt_float(float("inf")) is None
    assert fmt_float(float("nan")) is None
    assert fmt_float(1.00000000005) == 1.0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "besseline", "eval", "gamma", "--u", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("6")
