import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from resummation.cli import RunConfig, main, run
from resummation.core import dump_series, explicit


def call(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generic_pattern(capsys):
    code, out, _ = call(["resum", "--pattern", "1,-1,0", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out) == [{"method": "generic", "value": "1/3"}]


def test_power_sums(capsys):
    for p, value in ((1, "1/4"), (3, "-1/8"), (2, "0")):
        code, out, _ = call(["resum", "--power", str(p), "--format", "csv"], capsys)
        assert code == 0 and list(csv.reader(io.StringIO(out)))[1][1] == value


def test_anharmonic_table(capsys):
    code, out, _ = call(["anharmonic", "--table", "--depth", "4", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["lower", "value", "upper", "value"]
    assert rows[1] == ["P^0_1", "0.66667", "P^1_1", "0.95600"]
    assert rows[4] == ["P^3_4", "0.78102", "P^4_4", "0.82529"]


def test_catalog_listing_is_valid_csv(capsys):
    code, out, _ = call(["catalog", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert all(len(r) == 2 for r in rows)
    assert "euler-factorial" in {r[0] for r in rows}


def test_exit_codes(capsys):
    assert call(["resum", "--power", "x"], capsys)[0] == 2
    assert call(["heat", "--f", "no-such-profile"], capsys)[0] == 2
    assert call(["casimir", "--L", "-1"], capsys)[0] == 2
    code, _, err = call(["resum", "--input", "powers-of-two", "--method", "euler"], capsys)
    assert code == 3 and "ConvergenceFailure" in err


def test_digits_validation(capsys, monkeypatch):
    assert call(["casimir", "--digits", "5"], capsys)[0] == 2
    monkeypatch.setenv("RESUM_DIGITS", "9")
    assert call(["casimir"], capsys)[0] == 2
    monkeypatch.setenv("RESUM_DIGITS", "40")
    code, out, _ = call(["casimir", "--format", "json"], capsys)
    assert code == 0
    energy = json.loads(out)[0]["energy_per_area"]
    assert energy.startswith("-0.01370778389040188")


def test_run_config_rejects_unknown_params():
    code, text = run(RunConfig("casimir", params={"width": "1"}))
    assert code == 2 and "width" in text
    code, _ = run(RunConfig("nope"))
    assert code == 2


def test_deterministic(capsys):
    argv = ["quintic", "--variant", "singular", "--K", "30", "--format", "json"]
    first = call(argv, capsys)
    second = call(argv, capsys)
    assert first == second and first[0] == 0


def test_json_input_file(tmp_path, capsys):
    path = tmp_path / "log2.json"
    dump_series(explicit([Fraction((-1) ** n, n + 1) for n in range(12)], name="log2"), path)
    code, out, _ = call(["accel", "--input", str(path), "--terms", "10", "--iterations", "2", "--format", "csv"], capsys)
    rows = {r[0]: r[1:] for r in csv.reader(io.StringIO(out))}
    assert code == 0
    assert rows["S^1"][0] == "7/10"
    assert abs(float(Fraction(rows["S^2"][5])) - math.log(2)) < 1e-5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "resummation", "resum", "--zeta", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "-1/12" in proc.stdout
