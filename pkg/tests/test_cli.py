import json

import jsonschema
import pytest

from padic_hardy.cli import load_schema, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema())
    return code, rep


def audit(row):
    """Recompute a row's verdict from its recorded numbers."""
    m = row["method"]
    assert row["gap"] == pytest.approx(row["reference"] - row["value"], abs=1e-15)
    if m == "random_upper":
        return row["violations"] == 0 and row["value"] <= row["reference"] + row["tolerance"]
    if m == "extremizer":
        return row["gap"] < row["tolerance"] and row["max_excess"] <= 1e-10
    if m == "spectral":
        return 0 <= row["gap"] < row["tolerance"] and row["value"] >= row["half_window_value"]
    if m.startswith("commutator_"):
        change = abs(row["value"] - row["reference"]) / row["reference"]
        assert change == pytest.approx(row["relative_change"])
        return change < row["tolerance"]
    if m == "oracle":
        return row["value"] == 0
    raise AssertionError(m)


def test_verify_hardy_example(capsys):
    code, rep = report(capsys, "verify-hardy", "--prime", "2", "--dim", "1", "--q", "2", "--alpha", "0")
    assert code == 0 and rep["pass"]
    assert rep["closed_form"] == pytest.approx(1.7071068, abs=1e-7)
    assert [e["method"] for e in rep["estimates"]] == ["random_upper", "extremizer", "spectral"]
    assert all(audit(e) == e["pass"] for e in rep["estimates"])
    assert rep["timing"] is None


def test_verify_hardy_alpha_half_p3(capsys):
    code, rep = report(capsys, "verify-hardy", "--q", "2", "--alpha", "0.5", "--dim", "1", "--prime", "3")
    assert code == 0
    expected = (1 - 1 / 3) / (1 - 3 ** (0.25 - 0.5))
    assert rep["closed_form"] == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "argv",
    [
        ("verify-hardy", "--prime", "2", "--dim", "1", "--q", "2", "--alpha", "1"),
        ("verify-hardy", "--prime", "3", "--dim", "2", "--q", "3", "--alpha", "4"),
        ("verify-hardy", "--prime", "4"),
        ("verify-hlp", "--prime", "2", "--q", "2", "--alpha", "-1"),
        ("verify-commutator", "--prime", "2", "--dim", "1", "--r", "2", "--alpha", "0.5"),
        ("verify-hardy", "--q", "abc"),
        ("verify-hardy", "--bogus"),
        (),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    try:
        code, _, _ = run(capsys, *argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_verify_hlp_examples(capsys):
    code, rep = report(capsys, "verify-hlp", "--prime", "2", "--q", "2", "--alpha", "0")
    assert code == 0 and rep["closed_form"] == pytest.approx(2.9142136, abs=1e-7)
    code, rep = report(capsys, "verify-hlp", "--prime", "5", "--q", "3", "--alpha", "1")
    assert code == 0 and [e["method"] for e in rep["estimates"]] == ["random_upper", "extremizer"]
    assert rep["params"]["dim"] == 1


def test_verify_commutator_report(capsys):
    code, rep = report(capsys, "verify-commutator", "--prime", "3", "--dim", "1", "--r", "2", "--alpha", "0.25",
                       "--q1", "1", "--q2", "2", "--trials", "30", "--seed", "2")
    assert code in (0, 3)
    assert code == (0 if rep["pass"] else 3)
    assert all(audit(e) == e["pass"] for e in rep["estimates"])
    zero = [t for t in rep["trials"] if t["trial"] == 0]
    assert len(zero) == 3 and all(t["ratio"] == 0 for t in zero)


def test_sweep(capsys):
    code, rep = report(capsys, "sweep", "--primes", "2,3,5", "--dims", "1,2", "--qs", "2", "--alphas", "0")
    assert code == 0 and len(rep["rows"]) == 6 and all(r["pass"] for r in rep["rows"])
    first = rep["rows"][0]
    assert (first["prime"], first["dim"]) == (2, 1) and first["closed_form"] == pytest.approx(1.7071068, abs=1e-7)


def test_sweep_empty_grid(capsys):
    code, out, err = run(capsys, "sweep", "--primes", "2", "--dims", "1", "--qs", "2", "--alphas", "5")
    assert code == 0 and "warning" in err
    assert json.loads(out)["rows"] == []


def test_oracle_check_command(capsys):
    code, rep = report(capsys, "oracle-check", "--trials", "6", "--seed", "1")
    assert code == 0 and rep["pass"]
    assert rep["estimates"][0]["cases"] == 6


def test_csv_projection(capsys):
    code, out, _ = run(capsys, "verify-hardy", "--prime", "3", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("subcommand,row,method,value")
    assert len(lines) == 4


def test_reports_are_byte_reproducible(capsys):
    argv = ("verify-hlp", "--prime", "3", "--q", "3", "--alpha", "0.5", "--seed", "9")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_config_file_then_flags(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# grid point\nprime = 3\nalpha = 0.5\neps-depth = 16\n")
    _, rep = report(capsys, "verify-hardy", "--config", str(cfg))
    assert rep["params"]["prime"] == 3 and rep["params"]["eps_depth"] == 16
    _, rep = report(capsys, "verify-hardy", "--config", str(cfg), "--prime", "5")
    assert rep["params"]["prime"] == 5 and rep["params"]["alpha"] == "0.5"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "verify-hardy", "--config", str(bad))[0] == 2


def test_output_file_and_timing(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify-hardy", "--prime", "2", "--timing", "--out", str(target))
    assert code == 0 and out == ""
    rep = json.loads(target.read_text())
    assert rep["timing"] > 0


def test_print_schema(capsys):
    code, out, _ = run(capsys, "--print-schema")
    assert code == 0 and json.loads(out)["$id"] == "report/v1"
