"""End-to-end checks of the command-line surface.

Commands are exercised through main() so exit codes and output go
through the same path as the console script; one subprocess test
covers the module entry point itself.
"""

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qplancherel import cli
from qplancherel.measure import expectation_sigma, measure_table
from qplancherel.selftest import CheckResult


def run_cli(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_measure_csv_probabilities_sum_to_one(capsys):
    code, out, _ = run_cli(["measure", "--n", "4", "--q", "1/2"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    total = sum(float(r["probability"]) for r in rows)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_measure_symbolic_matches_table(capsys):
    code, out, _ = run_cli(["measure", "--n", "3", "--symbolic"], capsys)
    assert code == 0
    rows = {r["partition"]: r["probability"] for r in csv.DictReader(io.StringIO(out))}
    table = {",".join(map(str, lam)): str(v) for lam, v in measure_table(3).items()}
    assert rows == table


def test_q_accepts_fraction_and_decimal(capsys):
    _, out_frac, _ = run_cli(["measure", "--n", "5", "--q", "1/2"], capsys)
    _, out_dec, _ = run_cli(["measure", "--n", "5", "--q", "0.5"], capsys)
    assert out_frac == out_dec


def test_product_worked_example(capsys):
    code, out, _ = run_cli(["product", "--mu", "2", "--nu", "2"], capsys)
    assert code == 0
    assert out.strip() == "Sigma[2,2] + 4*Sigma[3] + 2*Sigma[1,1]"


def test_idcum_output(capsys):
    code, out, _ = run_cli(["idcum", "--ks", "2,2"], capsys)
    assert code == 0
    assert out.strip() == "4*Sigma[3] + 2*Sigma[1,1]"


def test_ram_renders_both_directions(capsys):
    code, out, _ = run_cli(["ram", "--rho", "2"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("SigmaQ[2] = ")
    assert lines[1].startswith("Sigma[2] = ")
    assert "SigmaQ[" in lines[1]  # second direction rendered in the other basis


def test_qchar_symbolic_and_at_point(capsys):
    code, out, _ = run_cli(["qchar", "--lambda", "3,1", "--mu", "2"], capsys)
    assert code == 0
    assert out.strip() == "-1/3 + 2/3*q"
    code, out, _ = run_cli(
        ["qchar", "--lambda", "3,1", "--mu", "2", "--q", "1/2"], capsys
    )
    assert code == 0
    assert out.strip() == "0"


def test_expect_closed_matches_brute(capsys):
    _, closed, _ = run_cli(["expect", "--mu", "2", "--n", "6", "--q", "1/3"], capsys)
    _, brute, _ = run_cli(
        ["expect", "--mu", "2", "--n", "6", "--q", "1/3", "--brute"], capsys
    )
    assert closed == brute
    assert Fraction(closed.strip()) == expectation_sigma((2,), 6).eval_at(Fraction(1, 3))


def test_cov_routes_agree_through_cli(capsys):
    outputs = set()
    for route in ("closed", "doublesum", "mobius"):
        code, out, _ = run_cli(
            ["cov", "--k", "2", "--l", "3", "--q", "1/2", "--route", route], capsys
        )
        assert code == 0
        outputs.add(out.strip())
    assert outputs == {"1/70"}


def test_mobius_agreement(capsys):
    code, out, _ = run_cli(["mobius", "--n", "5", "--poly", "0,1/2,1"], capsys)
    assert code == 0
    assert "agree  = True" in out


def test_basis_json_contains_both_matrices(capsys):
    code, out, _ = run_cli(["basis", "--degree", "3", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"degree", "h_in_p", "p_in_h"}
    assert payload["h_in_p"]["3"]["3"] == "1/3"


def test_sample_deterministic_under_seed(capsys):
    args = ["sample", "--n", "6", "--q", "1/2", "--count", "40", "--method", "exact"]
    _, first, _ = run_cli(args + ["--seed", "11"], capsys)
    _, second, _ = run_cli(args + ["--seed", "11"], capsys)
    _, other, _ = run_cli(args + ["--seed", "12"], capsys)
    assert first == second
    assert first != other
    assert len(first.strip().splitlines()) == 40


def test_sample_stats_json(capsys):
    code, out, _ = run_cli(
        [
            "sample", "--n", "8", "--q", "0.5", "--count", "300",
            "--method", "rsk", "--stats", "2,3", "--seed", "5",
        ],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["ks"] == [2, 3]
    assert len(payload["mean"]) == 2
    assert len(payload["cov"]) == 2


CLT_ARGS = [
    "clt", "--n", "10", "--q", "1/2", "--count", "600", "--sampler", "exact",
    "--bootstrap", "0", "--gate-draws", "3000", "--seed", "9",
]


def test_clt_reports_byte_identical(capsys):
    _, first, _ = run_cli(CLT_ARGS, capsys)
    _, second, _ = run_cli(CLT_ARGS, capsys)
    assert first == second
    payload = json.loads(first)
    assert payload["config"]["seed"] == 9
    assert payload["gate"]["passed"] is True


def test_clt_csv_format(capsys):
    code, out, _ = run_cli(CLT_ARGS + ["--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    kinds = {r["record"] for r in rows}
    assert {"coordinate", "cov", "check"} <= kinds


def test_config_file_supplies_defaults_and_cli_wins(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "n = 10\nq = 1/2\ncount = 600\nsampler = exact\n"
        "bootstrap = 0\ngate-draws = 3000\nseed = 9\n# comment\n"
    )
    _, from_cfg, _ = run_cli(["clt", "--config", str(cfg)], capsys)
    assert json.loads(from_cfg)["config"]["num_samples"] == 600
    _, overridden, _ = run_cli(
        ["clt", "--config", str(cfg), "--count", "800"], capsys
    )
    assert json.loads(overridden)["config"]["num_samples"] == 800


def test_out_writes_file_instead_of_stdout(tmp_path, capsys):
    target = tmp_path / "cov.txt"
    code, out, _ = run_cli(
        ["cov", "--k", "2", "--l", "2", "--q", "1/2", "--out", str(target)], capsys
    )
    assert code == 0
    assert out == ""
    assert target.read_text().strip() == "1/14"


def test_selftest_exit_codes(monkeypatch, capsys):
    passing = [CheckResult("alpha", True, "ok")]
    failing = [CheckResult("alpha", True, "ok"), CheckResult("beta", False, "boom")]
    monkeypatch.setattr(cli.selftest_mod, "run", lambda full=False: passing)
    code, out, _ = run_cli(["selftest"], capsys)
    assert code == 0 and "PASS" in out
    monkeypatch.setattr(cli.selftest_mod, "run", lambda full=False: failing)
    code, out, _ = run_cli(["selftest"], capsys)
    assert code == 1 and "FAIL  beta" in out


def test_missing_required_option_exits_two(capsys):
    code, _, err = run_cli(["cov", "--k", "2"], capsys)
    assert code == 2
    assert "--l" in err


def test_invalid_partition_exits_two(capsys):
    code, _, err = run_cli(["qchar", "--lambda", "2,3", "--mu", "2"], capsys)
    assert code == 2
    assert "error:" in err


def test_unsupported_format_rejected(capsys):
    code, _, err = run_cli(["product", "--mu", "2", "--nu", "2", "--format", "csv"], capsys)
    assert code == 2
    assert "format" in err


def test_chartable_trivial_row(capsys):
    code, out, _ = run_cli(["chartable", "--n", "4"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    trivial = next(r for r in rows if r[0] == "4")
    assert all(v == "1" for v in trivial[1:])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qplancherel", "cov", "--k", "2", "--l", "3", "--q", "1/2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1/70"
