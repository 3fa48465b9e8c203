import csv
import io
import json
import subprocess
import sys

import pytest

from sievelab import REPORT_HEADER
from sievelab.cli import main

CENSUS_KEYS = ["X", "beta", "gamma", "variant", "weight", "T0", "T1", "combined", "main_term", "ratio", "seconds"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0] == REPORT_HEADER
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


class TestCensusCommand:
    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, "census", "--x", "10000", "--beta", "0", "--gamma", "0.5")
        assert code == 0
        rows = parse_csv(out)
        assert list(rows[0].keys()) == CENSUS_KEYS
        assert rows[0]["seconds"] == ""

    def test_json_mirror(self, capsys):
        _, out_csv, _ = run(capsys, "census", "--x", "10000", "--variant", "primes-only")
        _, out_json, _ = run(capsys, "census", "--x", "10000", "--variant", "primes-only", "--format", "json")
        doc = json.loads(out_json)
        row = parse_csv(out_csv)[0]
        for k in CENSUS_KEYS:
            assert k in doc
        assert repr(doc["T1"]) == row["T1"] and doc["variant"] == "primes_only"

    def test_byte_identical(self, capsys):
        argv = ["census", "--x", "200000", "--beta", "0.1", "--gamma", "0.4"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_threads_identical(self, capsys):
        argv = ["census", "--x", "300000", "--format", "json"]
        a = run(capsys, *argv, "--threads", "1")[1]
        b = run(capsys, *argv, "--threads", "4")[1]
        assert a == b

    def test_threads_env(self, capsys, monkeypatch):
        argv = ["eh-scan", "--x", "20000", "--delta", "0.5"]
        a = run(capsys, *argv)[1]
        monkeypatch.setenv("THREADS", "3")
        assert run(capsys, *argv)[1] == a

    def test_timing_opt_in(self, capsys):
        _, out, _ = run(capsys, "census", "--x", "1000", "--timing")
        assert float(parse_csv(out)[0]["seconds"]) >= 0

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "r.csv"
        code, out, _ = run(capsys, "census", "--x", "1000", "--out", str(dest))
        assert code == 0 and out == ""
        assert dest.read_text().startswith(REPORT_HEADER)

    def test_weighted(self, capsys):
        code, out, _ = run(capsys, "census-weighted", "--x", "10000", "--weight", "discrete-plateau")
        row = parse_csv(out)[0]
        assert code == 0 and 0.9 < float(row["t0_coefficient"]) < 1.0


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["census", "--x", "100", "--bogus"])
        assert e.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["nope"])
        assert e.value.code == 2

    def test_argument_error(self, capsys):
        code, _, err = run(capsys, "census", "--x", "1000", "--beta", "0.7", "--gamma", "0.5")
        assert code == 2 and "argument error" in err

    def test_bad_threads(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["census", "--x", "1000", "--threads", "0"])
        assert e.value.code == 2

    def test_identity_pass_and_fail(self, capsys):
        code, out, _ = run(capsys, "identity-check", "--nu1", "2", "--nu2", "3", "--x", "2000")
        assert code == 0 and float(parse_csv(out)[0]["max_abs_error"]) <= 1e-8
        code, _, _ = run(capsys, "identity-check", "--nu1", "2", "--nu2", "3", "--x", "2000", "--tol", "0")
        assert code == 3


class TestOtherCommands:
    def test_combinatorics(self, capsys):
        code, out, _ = run(capsys, "combinatorics-check", "--numax", "8")
        rows = parse_csv(out)
        assert code == 0
        assert all(r["agree"] == "True" for r in rows)
        cell = next(r for r in rows if (r["nu1"], r["nu2"], r["k0"]) == ("1", "2", "1"))
        assert cell["printed_agrees"] == "False" and cell["printed_form"] == "1/2"

    def test_inequality_suite(self, capsys):
        code, out, _ = run(capsys, "inequality-suite", "--numax", "3", "--n-max", "20000")
        assert code == 0 and all(r["holds"] == "True" for r in parse_csv(out))

    def test_bernstein_plot(self, capsys):
        code, out, _ = run(capsys, "bernstein-plot", "--points", "11", "--degree", "50")
        rows = parse_csv(out)
        assert code == 0 and len(rows) == 11 and list(rows[0]) == ["x", "F", "B_m"]

    def test_eh_per_modulus(self, capsys):
        code, out, _ = run(capsys, "eh-scan", "--x", "100", "--delta", "0.5", "--per-modulus")
        rows = parse_csv(out)
        assert [r["d"] for r in rows] == ["1", "3", "5", "7", "9"]
        assert "# digest=" in out

    def test_remainder(self, capsys):
        _, out, _ = run(capsys, "remainder-sum", "--x", "100", "--D", "10", "--f", "unit")
        assert float(parse_csv(out)[0]["value"]) <= 10

    def test_bounds_json_default(self, capsys):
        _, out, _ = run(capsys, "bounds", "--delta", "0.01", "--C0", "1")
        doc = json.loads(out)
        assert doc["rho_bound"] == pytest.approx(2 * 149**2 * 2.718281828459045 * 1e-6 * 4e4, rel=1e-12)
        _, out, _ = run(capsys, "bounds", "--epsilon", "0.1", "--nu", "2")
        assert json.loads(out)["delta_max"] == pytest.approx(0.01 / 4**40)

    def test_reference_and_twin(self, capsys):
        _, out, _ = run(capsys, "reference-sum", "--x", "10")
        assert float(parse_csv(out)[0]["lhs"]) > 0
        _, out, _ = run(capsys, "twin-constant", "--cutoff", "100000")
        assert parse_csv(out)[0]["value"].startswith("0.660")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sievelab", "twin-constant", "--cutoff", "10000"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.startswith(REPORT_HEADER)
