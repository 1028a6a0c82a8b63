"""Tests for the command-line interface and its CSV contracts."""

import math
import os
import subprocess
import sys

import pytest

from splitmi.cli import main, power_to_snr_db, snr_db_to_power

FAST = ["--samples", "4000", "--mixture", "1024", "--quad-order", "16",
        "--batches", "8", "--seed", "5"]


def run_cli(args, tmp_path, name="out.csv"):
    path = tmp_path / name
    code = main(args + ["--out", str(path)])
    text = path.read_text() if path.exists() else ""
    return code, text


class TestSnrMapping:
    def test_integer_db_round_trip(self):
        for db in range(-30, 41):
            assert power_to_snr_db(snr_db_to_power(db)) == float(db)

    def test_reference_points(self):
        assert snr_db_to_power(20) == pytest.approx(100.0, rel=1e-15)
        assert snr_db_to_power(0) == 1.0


class TestMiCommand:
    SCENARIO = ["--sigma-a2", "0.01", "--sigma-cov2", "1", "--sigma-rec2", "0.01",
                "--power", "100"]

    def test_approx_only_row(self, tmp_path):
        code, text = run_cli(["mi", *self.SCENARIO, "--rho", "1",
                              "--mode", "approx"], tmp_path)
        assert code == 0
        header, row = text.splitlines()
        assert header == "rho,mi_mc,stderr,mi_approx"
        fields = row.split(",")
        assert fields[0] == "1" and fields[1] == "" and fields[2] == ""
        assert float(fields[3]) == pytest.approx(math.log2(100.01 / 1.01), rel=1e-5)

    def test_both_modes_fills_all_fields(self, tmp_path):
        code, text = run_cli(["mi", *self.SCENARIO, *FAST, "--rho", "0.56",
                              "--mode", "both"], tmp_path)
        assert code == 0
        fields = text.splitlines()[1].split(",")
        assert all(fields)
        assert float(fields[1]) == pytest.approx(8.32, abs=0.5)

    def test_rho_zero_approx_is_usage_error(self, tmp_path):
        code, _ = run_cli(["mi", *self.SCENARIO, "--rho", "0",
                           "--mode", "approx"], tmp_path)
        assert code == 2

    def test_rho_zero_mc_allowed(self, tmp_path):
        code, text = run_cli(["mi", *self.SCENARIO, *FAST, "--rho", "0",
                              "--mode", "mc"], tmp_path)
        assert code == 0
        fields = text.splitlines()[1].split(",")
        assert fields[3] == "" and fields[1] != ""

    def test_snr_db_flag(self, tmp_path):
        args = ["mi", "--sigma-a2", "0.01", "--sigma-cov2", "1",
                "--sigma-rec2", "0.01", "--snr-db", "20", "--rho", "1",
                "--mode", "approx"]
        code, text = run_cli(args, tmp_path)
        assert code == 0
        assert float(text.splitlines()[1].split(",")[3]) == pytest.approx(
            math.log2(100.01 / 1.01), rel=1e-5)

    def test_missing_power_is_flag_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["mi", "--sigma-a2", "1", "--sigma-cov2", "1",
                  "--sigma-rec2", "1", "--rho", "0.5"])
        assert exc.value.code == 2

    def test_invalid_variance_is_validation_error(self, tmp_path):
        code, _ = run_cli(["mi", "--sigma-a2", "-1", "--sigma-cov2", "1",
                           "--sigma-rec2", "0.01", "--power", "100",
                           "--rho", "0.5", "--mode", "approx"], tmp_path)
        assert code == 2

    def test_numerical_failure_exit_code(self, tmp_path):
        # rectifier noise at the subnormal edge: every mixture/quadrature
        # term underflows
        code, _ = run_cli(["mi", "--sigma-a2", "0.01", "--sigma-cov2", "1",
                           "--sigma-rec2", "1e-300", "--power", "100",
                           *FAST, "--rho", "0.5", "--mode", "mc"], tmp_path)
        assert code == 3


class TestSweepCommand:
    ARGS = ["sweep", "--sigma-a2", "1", "--sigma-cov2", "1", "--sigma-rec2", "0.01",
            "--power", "100", *FAST, "--grid-step", "0.5"]

    def test_grid_and_schema(self, tmp_path):
        code, text = run_cli(self.ARGS, tmp_path)
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == "rho,mi_mc,stderr,mi_approx"
        assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "0.5", "1"]
        assert lines[1].split(",")[3] == ""  # no closed form at rho=0
        assert all(lines[i].split(",")[3] for i in (2, 3))

    def test_byte_identical_reruns(self, tmp_path):
        _, a = run_cli(self.ARGS, tmp_path, "a.csv")
        _, b = run_cli(self.ARGS, tmp_path, "b.csv")
        assert a == b

    def test_byte_identical_across_worker_counts(self, tmp_path):
        old = os.environ.get("SPLITMI_WORKERS")
        try:
            os.environ["SPLITMI_WORKERS"] = "1"
            _, a = run_cli(self.ARGS, tmp_path, "w1.csv")
            os.environ["SPLITMI_WORKERS"] = "4"
            _, b = run_cli(self.ARGS, tmp_path, "w4.csv")
        finally:
            if old is None:
                os.environ.pop("SPLITMI_WORKERS", None)
            else:
                os.environ["SPLITMI_WORKERS"] = old
        assert a == b

    def test_stdout_mode(self, capsys):
        code = main(["sweep", "--sigma-a2", "1", "--sigma-cov2", "1",
                     "--sigma-rec2", "0.01", "--power", "100", *FAST,
                     "--grid-step", "1.0"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("rho,mi_mc,stderr,mi_approx\n")
        assert len(out.splitlines()) == 3


class TestTableCommand:
    def test_default_table_shape_and_values(self, tmp_path):
        code, text = run_cli(["table"], tmp_path)
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == ("sigma_a2,sigma_cov2,sigma_rec2,power,"
                            "rho_star,g_mi,g_mi_pct,beta")
        assert len(lines) == 1 + 8 * 4
        rows = [ln.split(",") for ln in lines[1:]]
        # zero-gain scenarios: conversion noise not above 4x rectifier noise
        for r in rows:
            if float(r[2]) >= 0.25 * float(r[1]):
                assert float(r[4]) == 1.0 and float(r[5]) == 0.0
        # reference row: sa2=0.01, sr2=0.01 at P=100
        row = next(r for r in rows if r[0] == "0.01" and r[2] == "0.01"
                   and r[3] == "100")
        assert float(row[4]) == pytest.approx(0.56, abs=0.005)
        assert float(row[5]) == pytest.approx(1.68, abs=0.02)
        assert float(row[6]) == pytest.approx(0.253, abs=0.005)
        assert float(row[7]) == pytest.approx(1.69, abs=0.01)

    def test_beta_column_reference_values(self, tmp_path):
        _, text = run_cli(["table", "--power", "100"], tmp_path)
        rows = [ln.split(",") for ln in text.splitlines()[1:]]
        betas = {(r[0], r[2]): float(r[7]) for r in rows}
        assert betas[("0.01", "0.1")] == pytest.approx(0.31, abs=0.01)
        assert betas[("0.01", "0.01")] == pytest.approx(1.69, abs=0.01)
        assert betas[("0.01", "0.001")] == pytest.approx(2.71, abs=0.01)

    def test_custom_scenario_single_row(self, tmp_path):
        code, text = run_cli(["table", "--sigma-a2", "1", "--sigma-cov2", "1",
                              "--sigma-rec2", "1", "--power", "100"], tmp_path)
        assert code == 0
        lines = text.splitlines()
        assert len(lines) == 2
        fields = lines[1].split(",")
        assert fields[4] == "1" and fields[5] == "0" and fields[7] == "0"

    def test_mc_columns(self, tmp_path):
        code, text = run_cli(["table", "--sigma-a2", "0.01", "--sigma-cov2", "1",
                              "--sigma-rec2", "1", "--power", "10", "--mc",
                              *FAST], tmp_path)
        assert code == 0
        lines = text.splitlines()
        assert lines[0].endswith(",rho_star_mc,g_mi_mc")
        fields = lines[1].split(",")
        assert len(fields) == 10
        # cd_only scenario: the MC argmax should sit near rho=1 and the
        # MC gain near zero
        assert float(fields[8]) >= 0.85
        assert abs(float(fields[9])) < 0.25


class TestOptimalRhoCommand:
    def test_splitting_scenario(self, tmp_path):
        code, text = run_cli(["optimal-rho", "--sigma-a2", "0.01",
                              "--sigma-cov2", "1", "--sigma-rec2", "0.01"],
                             tmp_path)
        assert code == 0
        header, row = text.splitlines()
        assert header == "rho_star,regime,upsilon,phi,psi"
        fields = row.split(",")
        assert float(fields[0]) == pytest.approx(0.5605, abs=1e-4)
        assert fields[1] == "splitting"
        assert float(fields[2]) == pytest.approx(0.5605, abs=1e-4)

    def test_cd_only_scenario(self, tmp_path):
        code, text = run_cli(["optimal-rho", "--sigma-a2", "1",
                              "--sigma-cov2", "1", "--sigma-rec2", "1"], tmp_path)
        assert code == 0
        fields = text.splitlines()[1].split(",")
        assert fields[0] == "1" and fields[1] == "cd_only"

    def test_threshold_arithmetic(self, tmp_path):
        _, text = run_cli(["optimal-rho", "--sigma-a2", "0.01",
                           "--sigma-cov2", "1", "--sigma-rec2", "0.3"], tmp_path)
        fields = text.splitlines()[1].split(",")
        assert fields[0] == "1" and fields[1] == "cd_only"


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "splitmi.cli", "optimal-rho",
             "--sigma-a2", "1", "--sigma-cov2", "1", "--sigma-rec2", "1"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("rho_star,regime")
