"""Command line behavior: formats, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from correxp import cli
from correxp.errors import NumericalInstabilityError


def run_main(argv):
    return cli.main(argv)


class TestExponentsCommand:
    def test_json_payload(self, capsys):
        assert run_main(["exponents", "--k", "2", "--energy", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["detectors"] == 2
        assert payload["energy"] == 1.0
        assert payload["base"] == "bits"
        assert payload["quantum"] == pytest.approx(1.2451124978365313)
        assert payload["ratio_quantum_heterodyne"] == pytest.approx(3.0)

    def test_nats_base(self, capsys):
        run_main(["exponents", "--k", "2", "--energy", "1", "--base", "nats"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["heterodyne"] == pytest.approx(0.28768207245178093)

    def test_zero_energy_ratio_is_null(self, capsys):
        assert run_main(["exponents", "--k", "3", "--energy", "0"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ratio_quantum_heterodyne"] is None
        assert payload["quantum"] == 0.0

    def test_bad_detector_count(self, capsys):
        assert run_main(["exponents", "--k", "0", "--energy", "1"]) == 2
        assert "error" in capsys.readouterr().err


class TestSweepCommand:
    def test_csv_layout(self, tmp_path, capsys):
        out = tmp_path / "grid.csv"
        code = run_main(
            ["sweep", "--k", "3,2", "--e-min", "0.1", "--e-max", "1",
             "--e-points", "3", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "K,E,quantum,heterodyne,homodyne,photon,ratio_q_het"
        assert len(lines) == 7
        ks = [int(line.split(",")[0]) for line in lines[1:]]
        assert ks == [2, 2, 2, 3, 3, 3]
        energies = [float(line.split(",")[1]) for line in lines[1:4]]
        assert energies == sorted(energies)

    def test_single_point_grid(self, tmp_path):
        out = tmp_path / "one.csv"
        code = run_main(
            ["sweep", "--k", "2", "--e-min", "0.5", "--e-max", "0.5",
             "--e-points", "1", "--out", str(out)]
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 2

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--k", "2,4", "--e-points", "8"]
        assert run_main(args + ["--out", str(a)]) == 0
        assert run_main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_single_detector_ratio_is_inf(self, tmp_path):
        out = tmp_path / "k1.csv"
        run_main(["sweep", "--k", "1", "--e-min", "1", "--e-max", "1",
                  "--e-points", "1", "--out", str(out)])
        row = out.read_text().splitlines()[1].split(",")
        assert row[6] == "inf"

    def test_invalid_grid(self, capsys):
        assert run_main(["sweep", "--k", "2", "--e-min", "0", "--out", "/tmp/x.csv"]) == 2
        assert run_main(["sweep", "--k", "2", "--e-min", "2", "--e-max", "1",
                         "--out", "/tmp/x.csv"]) == 2
        assert run_main(["sweep", "--k", "two", "--out", "/tmp/x.csv"]) == 2
        capsys.readouterr()

    def test_unwritable_output(self, tmp_path, capsys):
        missing = tmp_path / "no" / "such" / "dir" / "out.csv"
        assert run_main(["sweep", "--k", "2", "--e-points", "2",
                         "--out", str(missing)]) == 3
        assert "I/O" in capsys.readouterr().err

    def test_thread_env_must_be_positive(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.THREAD_ENV, "0")
        assert run_main(["sweep", "--k", "2", "--e-points", "2",
                         "--out", str(tmp_path / "x.csv")]) == 2
        capsys.readouterr()

    def test_thread_env_does_not_change_output(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--k", "2,3", "--e-points", "6"]
        monkeypatch.setenv(cli.THREAD_ENV, "1")
        run_main(args + ["--out", str(a)])
        monkeypatch.setenv(cli.THREAD_ENV, "3")
        run_main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSimulateCommand:
    def test_csv_and_sidecar(self, tmp_path):
        out = tmp_path / "run.csv"
        code = run_main(
            ["simulate", "--strategy", "photon_counting", "--k", "2", "--energy", "1",
             "--n-grid", "3,5", "--shots", "2000", "--seed", "9", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n,alpha_hat,beta_hat,exponent_hat,ci_low,ci_high"
        assert len(lines) == 3
        sidecar = json.loads((tmp_path / "run.csv.json").read_text())
        assert sidecar["strategy"] == "photon_counting"
        assert sidecar["shots"] == 2000
        assert sidecar["analytic_exponent"] == pytest.approx(1.0817041659455104)
        assert "timestamp" not in " ".join(sidecar.keys())

    def test_byte_identical_reruns(self, tmp_path):
        args = ["simulate", "--strategy", "homodyne", "--k", "2", "--energy", "1",
                "--n-grid", "4", "--shots", "1000", "--seed", "3"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_main(args + ["--out", str(a)]) == 0
        assert run_main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.csv.json").read_bytes() == (tmp_path / "b.csv.json").read_bytes()

    def test_infeasible_grid_is_usage_error(self, tmp_path, capsys):
        code = run_main(
            ["simulate", "--strategy", "heterodyne", "--k", "2", "--energy", "1",
             "--n-grid", "40", "--shots", "1000", "--out", str(tmp_path / "x.csv")]
        )
        assert code == 2
        message = capsys.readouterr().err
        assert "infeasible" in message
        assert "--shots" in message

    def test_shot_floor(self, tmp_path, capsys):
        code = run_main(
            ["simulate", "--strategy", "homodyne", "--k", "2", "--energy", "1",
             "--n-grid", "4", "--shots", "500", "--out", str(tmp_path / "x.csv")]
        )
        assert code == 2
        capsys.readouterr()


class TestValidateCommand:
    def test_fast_level_passes(self, capsys):
        assert run_main(["validate", "--level", "fast"]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out
        assert "0 failed" in out

    def test_failure_exit_code(self, capsys, monkeypatch):
        from correxp.validate import CheckResult

        fake = [CheckResult("doomed", "FAIL", 1.0, 0.0, "abs 0", "", 0.0)]
        monkeypatch.setattr(cli.validate_mod, "run_checks", lambda level: fake)
        assert run_main(["validate"]) == 1
        assert "1 failed" in capsys.readouterr().out

    def test_instability_maps_to_exit_4(self, capsys, monkeypatch):
        def explode(level):
            raise NumericalInstabilityError("synthetic")

        monkeypatch.setattr(cli.validate_mod, "run_checks", explode)
        assert run_main(["validate"]) == 4
        assert "instability" in capsys.readouterr().err


class TestArgumentHandling:
    def test_unknown_subcommand(self, capsys):
        assert run_main(["transmogrify"]) == 2
        capsys.readouterr()

    def test_help_exits_zero(self, capsys):
        assert run_main(["--help"]) == 0
        capsys.readouterr()

    def test_console_script_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "correxp.cli", "exponents", "--k", "2", "--energy", "0.5"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["detectors"] == 2
