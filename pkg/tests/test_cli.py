"""
Tests for the command-line surface: run, compare, check and seed handling.
"""

import json
from pathlib import Path

import pytest

from bastion_cli import cli
from bastion_cli.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_SAFETY,
    RESOLVED_CONFIG_FILE,
    SEED_ENV,
    SUMMARY_FILE,
    TRAJECTORY_FILE,
    compare_summaries,
    format_comparison,
    main,
    resolve_seed,
    run_job,
)
from bastion_engine.simulation import Simulation
from telemetry.csv_export import read_trajectory_csv

from tests.helpers import builders


@pytest.fixture
def scalar_file(tmp_path):
    path = tmp_path / "scalar.json"
    path.write_text(json.dumps(builders.build_scalar(duration=0.6).to_dict()))
    return path


def _run(scalar_file, out, *extra):
    return main(["run", str(scalar_file), "--out", str(out), *extra])


def test_run_writes_artifacts(scalar_file, tmp_path):
    out = tmp_path / "run"
    assert _run(scalar_file, out) == EXIT_OK

    summary = json.loads((out / SUMMARY_FILE).read_text())
    assert summary["status"] == "ok"
    assert summary["scenario"] == "scalar_test"
    assert summary["rows"] == 601

    resolved = json.loads((out / RESOLVED_CONFIG_FILE).read_text())
    assert resolved["duration"] == 0.6
    header, rows = read_trajectory_csv(out / TRAJECTORY_FILE)
    assert header[0] == "t"
    assert len(rows) == 601


def test_run_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.yaml"), "--out", str(tmp_path / "out")]) == EXIT_CONFIG


def test_run_job_reports_config_error(tmp_path):
    bad = tmp_path / "bad.json"
    data = builders.build_scalar().to_dict()
    data["dt"] = -1.0
    bad.write_text(json.dumps(data))
    manifest = run_job(str(bad), str(tmp_path / "out"))
    assert manifest.exit_code == EXIT_CONFIG
    assert not manifest.summary_path.exists()


def test_run_job_records_safety_abort(monkeypatch, tmp_path):
    """A run that leaves the barrier domain still writes its summary and exits 2."""

    class ConeExitSimulation(Simulation):
        def __init__(self, *args, **kwargs):
            super().__init__(*args, **kwargs)
            for _ in range(5):
                self.step()
            self.y[self.layout.slices["bas"].start] = -2.0 * self.problem.spec.beta0

    monkeypatch.setattr(cli, "Simulation", ConeExitSimulation)
    path = tmp_path / "case.json"
    path.write_text(json.dumps(builders.build_case_study(duration=0.6).to_dict()))

    manifest = run_job(str(path), str(tmp_path / "out"))
    assert manifest.exit_code == EXIT_SAFETY
    summary = json.loads(manifest.summary_path.read_text())
    assert summary["status"] == "safety_violation"
    assert summary["error"]["kind"] == "safety_violation"
    assert summary["hjb_residual_final"] is None
    assert manifest.trajectory_path.exists()


def test_duration_override(scalar_file, tmp_path):
    out = tmp_path / "run"
    assert _run(scalar_file, out, "--duration", "0.5") == EXIT_OK
    assert json.loads((out / SUMMARY_FILE).read_text())["rows"] == 501


def test_cli_seed_recorded(scalar_file, tmp_path):
    out = tmp_path / "run"
    assert _run(scalar_file, out, "--duration", "0.5", "--seed", "7") == EXIT_OK
    assert json.loads((out / RESOLVED_CONFIG_FILE).read_text())["grid"]["seed"] == 7


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "11")
    assert resolve_seed(None) == 11
    assert resolve_seed(3) == 3


def test_seed_environment_unset(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    assert resolve_seed(None) is None


def test_bad_seed_environment(monkeypatch, scalar_file, tmp_path):
    monkeypatch.setenv(SEED_ENV, "eleven")
    with pytest.raises(ValueError):
        resolve_seed(None)
    assert _run(scalar_file, tmp_path / "run") == EXIT_CONFIG


def test_compare_run_with_itself(scalar_file, tmp_path, capsys):
    out = tmp_path / "run"
    assert _run(scalar_file, out, "--duration", "0.5") == EXIT_OK
    report = tmp_path / "cmp.json"
    assert main(["compare", str(out), str(out), "--json", str(report)]) == EXIT_OK

    comparison = json.loads(report.read_text())
    for row in comparison["rows"]:
        if row["delta"] is not None:
            assert row["delta"] == 0
    assert comparison["larger_safety_margin"] == "equal"
    assert "larger safety margin: equal" in capsys.readouterr().out


def test_compare_missing_summary(tmp_path):
    assert main(["compare", str(tmp_path / "a"), str(tmp_path / "b")]) == EXIT_CONFIG


def test_compare_summaries_margin():
    a = {"scenario": "bas", "min_h": 0.2, "theta_err_final": 1e-3, "J_total": 3.0, "incursions": 0}
    b = {"scenario": "plain", "min_h": -0.1, "theta_err_final": 0.5, "J_total": 2.0, "incursions": 1}
    comparison = compare_summaries(a, b)
    assert comparison["larger_safety_margin"] == "A"
    assert comparison["verdicts"]["A"]["safe"] is True
    assert comparison["verdicts"]["B"]["safe"] is False
    assert comparison["verdicts"]["A"]["theta_converged"] is True
    rows = {row["metric"]: row for row in comparison["rows"]}
    assert rows["J_total"]["delta"] == pytest.approx(-1.0)
    assert rows["sigmin_grid_inf"]["delta"] is None
    assert "min_h" in format_comparison(comparison)


def test_check_accepts_run_output(scalar_file, tmp_path):
    out = tmp_path / "run"
    assert _run(scalar_file, out, "--duration", "0.5") == EXIT_OK
    assert main(["check", str(out / TRAJECTORY_FILE)]) == EXIT_OK


def test_check_rejects_bad_file(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x1\n0.0,1.0\n0.0,2.0\n")
    assert main(["check", str(bad)]) == EXIT_CONFIG
    assert main(["check", str(tmp_path / "missing.csv")]) == EXIT_CONFIG


def test_bundled_scenarios_load():
    from scenarios.loader import load_scenario

    root = Path(__file__).resolve().parent.parent / "scenarios"
    for name in ("case7_bas.yaml", "case7_nosafety.yaml", "case7_bas_figure_obstacle.yaml", "lqr_scalar.yaml"):
        config = load_scenario(str(root / name))
        assert config.name


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
