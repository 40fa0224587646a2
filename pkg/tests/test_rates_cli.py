import json
import math
import subprocess
import sys

import pytest

from miw import rates
from miw.cli import main
from miw.errors import DomainError
from miw.rates import Correction, fit_rate, rate_study, sweep


class TestFitRate:
    def test_exact_power_law(self):
        pairs = [(n, 3.7 / n) for n in (10, 20, 40, 80)]
        fit = fit_rate(pairs)
        assert fit.exponent == pytest.approx(-1.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert math.exp(fit.intercept) == pytest.approx(3.7, rel=1e-10)

    def test_sqrt_log_correction_removes_factor(self):
        pairs = [(n, math.sqrt(math.log(n)) / n) for n in (10, 30, 90, 270)]
        fit = fit_rate(pairs, Correction.SQRT_LOG)
        assert fit.exponent == pytest.approx(-1.0, abs=1e-10)

    def test_log6_correction(self):
        pairs = [(n, math.log(n) ** 6 / n**2) for n in (10, 30, 90)]
        fit = fit_rate(pairs, Correction.LOG_POW6)
        assert fit.exponent == pytest.approx(-2.0, abs=1e-10)

    def test_degenerate_inputs(self):
        with pytest.raises(DomainError):
            fit_rate([(10, 1.0), (20, 0.5)])
        with pytest.raises(DomainError):
            fit_rate([(10, 1.0), (10, 0.5), (20, 0.1)])
        with pytest.raises(DomainError):
            fit_rate([(10, 1.0), (20, -0.5), (40, 0.1)])

    def test_unsorted_input_accepted(self):
        pairs = [(40, 1.0 / 40), (10, 0.1), (20, 0.05)]
        fit = fit_rate(pairs)
        assert fit.n_grid == (10, 20, 40)


class TestSweep:
    def test_serial_matches_parallel(self):
        grid = [20, 40, 60]
        serial = sweep(1, grid, metric="w1", jobs=1)
        parallel = sweep(1, grid, metric="w1", jobs=2)
        assert serial == parallel
        assert [n for n, _ in serial] == grid

    def test_median_metric(self):
        vals = sweep(2, [20, 40], metric="xm", jobs=1)
        assert vals[0][1] > vals[1][1] > 0.0

    def test_unknown_metric(self):
        with pytest.raises(DomainError):
            sweep(1, [10, 20], metric="nope")

    def test_rate_study_x_m_slope(self):
        fit = rate_study(2, range(14, 115, 10), Correction.NONE, metric="xm", jobs=1)
        assert -1.0 / fit.exponent == pytest.approx(3.1, rel=0.05)


def _run_cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "miw.cli", *argv],
        capture_output=True,
        text=True,
    )
    return proc


class TestCli:
    def test_radial_csv(self):
        proc = _run_cli("radial", "--k", "1", "--n", "22")
        assert proc.returncode == 0
        lines = proc.stdout.strip().split("\n")
        assert lines[0].startswith("# miw ")
        assert "radial" in lines[0]
        assert lines[1] == "# k=1"
        values = [float(v) for v in lines[3:]]
        assert len(values) == 22

    def test_kernel_matched_runs(self):
        proc = _run_cli("kernel", "--k", "2", "--n", "20", "--format", "json")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["N"] == 20 and len(payload["points"]) == 20

    def test_bound_json_dominance(self):
        proc = _run_cli("bound", "--k", "2", "--n", "50", "--exact", "--format", "json")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["exact_w1"] <= payload["total_bound"]
        assert payload["dominance_ok"] is True

    def test_bound_csv_columns(self):
        proc = _run_cli("bound", "--k", "1", "--n", "30", "--coupling")
        header = proc.stdout.strip().split("\n")[1]
        assert header == "k,N,term10,term11,total,exact_w1,coupling_bound,inverse_moment_l1"

    def test_wasserstein_csv(self):
        proc = _run_cli("wasserstein", "--k", "0", "--n", "40")
        rows = proc.stdout.strip().split("\n")
        assert rows[1] == "k,N,w1"
        k, n, w1 = rows[2].split(",")
        assert float(w1) > 0.0

    def test_config_csv_row_count(self):
        proc = _run_cli("config", "--d", "3", "--n", "2744")
        assert proc.returncode == 0
        lines = proc.stdout.strip().split("\n")
        assert lines[0].startswith("# miw ")
        assert len(lines) == 2746  # provenance + header + 2744 points

    def test_config_json_plan(self):
        proc = _run_cli("config", "--d", "3", "--n", "2744", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["M"] == 7
        assert payload["K_per_shell"] == [28] * 7

    def test_excited_config(self):
        proc = _run_cli(
            "config", "--d", "2", "--n", "484", "--quanta", "1,0", "--format", "json"
        )
        payload = json.loads(proc.stdout)
        assert payload["radial_exponent"] == 3
        assert payload["state_label"] == [1, 0]

    def test_rates_json(self):
        proc = _run_cli(
            "rates",
            "--k",
            "3",
            "--n-grid",
            "50:150:50",
            "--correction",
            "log6",
            "--jobs",
            "1",
            "--format",
            "json",
        )
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["correction"] == "log_pow6"
        assert len(payload["n_grid"]) == 3

    def test_coupling_subcommand(self):
        proc = _run_cli("coupling", "--k", "2", "--n", "40", "--l", "1", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["coupled_gap"] <= payload["gap_envelope"]

    def test_byte_identical_reruns(self):
        a = _run_cli("bound", "--k", "1", "--n", "40", "--exact")
        b = _run_cli("bound", "--k", "1", "--n", "40", "--exact")
        assert a.stdout == b.stdout

    def test_domain_error_exit_code(self):
        proc = _run_cli("radial", "--k", "-3", "--n", "10")
        assert proc.returncode == 2
        assert "miw:" in proc.stderr

    def test_numerical_failure_exit_code(self):
        proc = _run_cli("radial", "--k", "2", "--n", "600", "--tol", "1e-18")
        assert proc.returncode == 3

    def test_max_n_env(self, tmp_path):
        import os

        env = dict(os.environ, MIW_MAX_N="30")
        proc = subprocess.run(
            [sys.executable, "-m", "miw.cli", "radial", "--k", "0", "--n", "50"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode == 2

    def test_out_file(self, tmp_path):
        out = tmp_path / "sol.csv"
        rc = main(["radial", "--k", "0", "--n", "10", "--out", str(out)])
        assert rc == 0
        assert out.read_text().count("\n") == 13  # provenance + 2 metadata + 10 values

    def test_grid_parse_error(self):
        proc = _run_cli("rates", "--k", "1", "--n-grid", "50-100")
        assert proc.returncode == 2
