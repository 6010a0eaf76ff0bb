import json
import math
import subprocess
import sys


def run_cli(*args, env_extra=None, cwd=None):
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "degenwave.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


def csv_body(path):
    """CSV content with comment lines (timestamp etc.) stripped."""
    return [l for l in path.read_text().splitlines() if not l.startswith("#")]


class TestSpectrum:
    def test_writes_table_and_reruns_identically(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            res = run_cli("spectrum", "--alpha", "0.5", "--n", "256", "--out", str(out))
            assert res.returncode == 0, res.stderr
        body1 = csv_body(out1 / "spectrum.csv")
        assert body1[0].startswith("k,rho,flux_at_1")
        assert len(body1) == 9  # header + 8 eigenpairs
        assert body1 == csv_body(out2 / "spectrum.csv")

    def test_env_override(self, tmp_path):
        res = run_cli(
            "spectrum", "--n", "256", "--out", str(tmp_path),
            env_extra={"DEGENWAVE_KMAX": "3"},
        )
        assert res.returncode == 0, res.stderr
        assert len(csv_body(tmp_path / "spectrum.csv")) == 4


class TestHardy:
    def test_critical_reference_value(self, tmp_path):
        res = run_cli(
            "hardy", "--critical", "--delta", "0.01", "--bc", "mixed",
            "--n", "1024", "--out", str(tmp_path),
        )
        assert res.returncode == 0, res.stderr
        doc = json.loads((tmp_path / "hardy.json").read_text())
        rep = doc["result"]["report"]
        exact = 4.0 / math.pi**2 * math.log(100.0) ** 2  # ~8.5951
        assert abs(rep["reference_constant"] - exact) < 1e-9
        assert abs(rep["numerical_best_constant"] - exact) < 0.05
        assert doc["format_version"] == "1"
        assert doc["config"]["delta"] == 0.01

    def test_subcritical(self, tmp_path):
        res = run_cli("hardy", "--alpha", "0.3", "--n", "512", "--out", str(tmp_path))
        assert res.returncode == 0, res.stderr
        doc = json.loads((tmp_path / "hardy.json").read_text())
        assert doc["result"]["numerical_best_constant"] < doc["result"]["reference_constant"]


class TestConfigHandling:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"bogus_key": 1}')
        res = run_cli("spectrum", "--config", str(cfg))
        assert res.returncode == 2
        err = json.loads(res.stderr)
        assert "bogus_key" in err["error"]

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"n": "many"}')
        res = run_cli("spectrum", "--config", str(cfg))
        assert res.returncode == 2

    def test_config_file_used(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"n": 256, "kmax": 2, "out": str(tmp_path / "o")}))
        res = run_cli("spectrum", "--config", str(cfg))
        assert res.returncode == 0, res.stderr
        assert len(csv_body(tmp_path / "o" / "spectrum.csv")) == 3

    def test_numerical_failure_exit_code(self, tmp_path):
        res = run_cli(
            "validate-params", "--t-horizon", "10", "--out", str(tmp_path)
        )
        assert res.returncode == 1
        err = json.loads(res.stderr)
        assert err["kind"] == "TimeTooShort"


class TestValidateParams:
    def test_derived_quantities_emitted(self, tmp_path):
        res = run_cli(
            "validate-params", "--alpha", "0.5", "--delta0", "0.01",
            "--beta", "0.005", "--t-horizon", "50", "--out", str(tmp_path),
        )
        assert res.returncode == 0, res.stderr
        doc = json.loads((tmp_path / "params.json").read_text())
        for key in ("gamma", "gamma_hat", "epsilon", "A0", "A1", "lambda", "t0"):
            assert key in doc["result"]
        assert doc["result"]["t0"] == 25.0


class TestObservabilityCommand:
    def test_obstruction_artifacts(self, tmp_path):
        res = run_cli("observability", "--mode", "obstruction", "--out", str(tmp_path))
        assert res.returncode == 0, res.stderr
        doc = json.loads((tmp_path / "obstruction.json").read_text())
        assert 1.9 <= doc["result"]["slope"] <= 2.1
        body = csv_body(tmp_path / "obstruction.csv")
        assert body[0] == "n,pure_ratio,remedied_ratio"
        assert len(body) == 5


class TestSimulateCommand:
    def test_energy_series_artifacts(self, tmp_path):
        res = run_cli(
            "simulate", "--n", "256", "--n-max", "4", "--k-max", "4",
            "--samples", "64", "--t-horizon", "10", "--out", str(tmp_path),
        )
        assert res.returncode == 0, res.stderr
        body = csv_body(tmp_path / "energy.csv")
        assert body[0] == "t,E,kinetic,potential"
        assert len(body) == 66  # header + 65 samples
        doc = json.loads((tmp_path / "trace.json").read_text())
        assert doc["result"]["interior_norm_sq"] is not None
