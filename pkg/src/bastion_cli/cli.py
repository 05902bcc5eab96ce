"""
Command-line entry points.

Exit codes:
    0  success
    1  configuration or file error (also: failed CSV check, missed oracle tolerance)
    2  safety violation in a bas-rl run
    3  numerical failure (non-finite integration state)
"""

from __future__ import annotations

import argparse
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from bastion_engine.errors import DegenerateGainError, IntegrationBlowupError, SafetyViolationError
from bastion_engine.oracle import run_lqr_oracle
from bastion_engine.simulation import Simulation
from scenarios.factory import build_problem
from scenarios.loader import load_scenario
from telemetry.config import LogConfig, LogLevel
from telemetry.csv_export import check_trajectory_csv, write_trajectory_csv

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SAFETY = 2
EXIT_NUMERICAL = 3

SEED_ENV = "BASTION_SEED"
SUMMARY_FILE = "summary.json"
TRAJECTORY_FILE = "trajectory.csv"
RESOLVED_CONFIG_FILE = "resolved-config.json"

COMPARE_FIELDS = ("min_h", "argmin_t", "theta_err_final", "J_total", "incursions", "sigmin_grid_inf")
THETA_CONVERGED_TOL = 1e-2


@dataclass
class RunManifest:
    """Where one run wrote its artifacts and how it ended."""
    config_path: str
    out_dir: str
    exit_code: int
    scenario: Optional[str] = None
    message: str = ""

    @property
    def summary_path(self) -> Path:
        return Path(self.out_dir) / SUMMARY_FILE

    @property
    def trajectory_path(self) -> Path:
        return Path(self.out_dir) / TRAJECTORY_FILE


def _write_json(data: Any, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def resolve_seed(cli_seed: Optional[int]) -> Optional[int]:
    """CLI flag wins over the environment."""
    if cli_seed is not None:
        return cli_seed
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}")


def run_job(config_path: str, out_dir: str, dt: Optional[float] = None,
            duration: Optional[float] = None, seed: Optional[int] = None,
            log_config: Optional[LogConfig] = None) -> RunManifest:
    """Load, run and write one scenario. Never raises for run failures."""
    print(f"Loading scenario: {config_path}")
    try:
        config = load_scenario(config_path).with_overrides(dt=dt, duration=duration, seed=seed)
        problem = build_problem(config)
    except (FileNotFoundError, ValueError) as e:
        print(f"Error: {e}")
        return RunManifest(config_path=config_path, out_dir=out_dir, exit_code=EXIT_CONFIG, message=str(e))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config_dict = config.to_dict()
    digest = config.config_hash()
    _write_json(config_dict, out / RESOLVED_CONFIG_FILE)

    print(f"Running {config.name} ({config.mode}) for {config.duration}s at dt={config.dt}...")
    sim = Simulation(problem, log_config=log_config, config_dict=config_dict, config_hash=digest)
    exit_code = EXIT_OK
    error: Optional[dict[str, Any]] = None
    try:
        sim.run()
    except SafetyViolationError as e:
        exit_code = EXIT_SAFETY
        error = {"kind": "safety_violation", "t": e.t, "h": e.h, "message": str(e)}
    except IntegrationBlowupError as e:
        exit_code = EXIT_NUMERICAL
        error = {"kind": "numerical", "t": e.t, "stage": e.stage, "message": str(e)}
    except (DegenerateGainError, np.linalg.LinAlgError, FloatingPointError) as e:
        exit_code = EXIT_NUMERICAL
        error = {"kind": "numerical", "t": sim.t, "message": str(e)}
    finally:
        sim.close()

    write_trajectory_csv(sim.log, out / TRAJECTORY_FILE)
    if len(sim.log) > 0:
        summary = sim.summary()
    else:
        summary = {"scenario": config.name, "mode": config.mode, "config_hash": digest}
    summary["status"] = "ok" if error is None else error["kind"]
    if error is not None:
        summary["error"] = error
    _write_json(summary, out / SUMMARY_FILE)

    if error is None:
        print(f"Run complete: min_h={summary['min_h']:.6g}, theta_err_final={summary['theta_err_final']:.6g}, "
              f"J_total={summary['J_total']:.6g}")
    else:
        print(f"Run aborted: {error['message']}")
    print(f"Results saved to {out}/")
    return RunManifest(config_path=config_path, out_dir=str(out), exit_code=exit_code,
                       scenario=config.name, message=error["message"] if error else "")


def _job_out_dir(config_path: str, out_root: str, many: bool) -> str:
    if not many:
        return out_root
    try:
        name = load_scenario(config_path).name
    except (FileNotFoundError, ValueError):
        name = Path(config_path).stem
    return str(Path(out_root) / name)


def cmd_run(args: argparse.Namespace) -> int:
    try:
        seed = resolve_seed(args.seed)
    except ValueError as e:
        print(f"Error: {e}")
        return EXIT_CONFIG

    log_config = LogConfig(level=LogLevel.from_string(args.log_level))
    if args.telemetry_db:
        log_config.use_database = True
        log_config.db_path = args.telemetry_db

    many = len(args.configs) > 1
    jobs = [(path, _job_out_dir(path, args.out, many)) for path in args.configs]

    if many and args.jobs != 1:
        with ProcessPoolExecutor(max_workers=args.jobs or None) as pool:
            futures = [
                pool.submit(run_job, path, out_dir, args.dt, args.duration, seed, log_config)
                for path, out_dir in jobs
            ]
            manifests = [f.result() for f in futures]
    else:
        manifests = [run_job(path, out_dir, args.dt, args.duration, seed, log_config) for path, out_dir in jobs]

    if many:
        for m in manifests:
            print(f"  [{m.exit_code}] {m.config_path} -> {m.out_dir}")
    return max(m.exit_code for m in manifests)


def load_summary(run_dir: str) -> dict[str, Any]:
    path = Path(run_dir) / SUMMARY_FILE
    if not path.exists():
        raise FileNotFoundError(f"Summary not found: {path}")
    with open(path, "r") as f:
        return json.load(f)


def _verdicts(summary: dict[str, Any]) -> dict[str, Any]:
    min_h = summary.get("min_h")
    theta_err = summary.get("theta_err_final")
    return {
        "safe": min_h is not None and min_h > 0.0,
        "theta_converged": theta_err is not None and theta_err < THETA_CONVERGED_TOL,
        "status": summary.get("status", "ok"),
    }


def compare_summaries(a: dict[str, Any], b: dict[str, Any],
                      label_a: str = "A", label_b: str = "B") -> dict[str, Any]:
    """Side-by-side metrics of two runs; ``delta`` is B minus A."""
    rows = []
    for key in COMPARE_FIELDS:
        va, vb = a.get(key), b.get(key)
        delta = vb - va if isinstance(va, (int, float)) and isinstance(vb, (int, float)) else None
        rows.append({"metric": key, label_a: va, label_b: vb, "delta": delta})

    min_a, min_b = a.get("min_h"), b.get("min_h")
    if min_a is None or min_b is None:
        margin = "unknown"
    elif min_a > min_b:
        margin = label_a
    elif min_b > min_a:
        margin = label_b
    else:
        margin = "equal"
    return {
        "runs": {label_a: a.get("scenario"), label_b: b.get("scenario")},
        "rows": rows,
        "verdicts": {label_a: _verdicts(a), label_b: _verdicts(b)},
        "larger_safety_margin": margin,
    }


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def format_comparison(comparison: dict[str, Any], label_a: str = "A", label_b: str = "B") -> str:
    """Fixed-width text table of a comparison."""
    lines = [f"{'metric':<18}{label_a:>16}{label_b:>16}{'delta':>16}", "-" * 66]
    for row in comparison["rows"]:
        lines.append(f"{row['metric']:<18}{_cell(row[label_a]):>16}{_cell(row[label_b]):>16}{_cell(row['delta']):>16}")
    lines.append("-" * 66)
    for key in ("safe", "theta_converged", "status"):
        va = comparison["verdicts"][label_a][key]
        vb = comparison["verdicts"][label_b][key]
        lines.append(f"{key:<18}{str(va):>16}{str(vb):>16}")
    lines.append(f"larger safety margin: {comparison['larger_safety_margin']}")
    return "\n".join(lines)


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        a = load_summary(args.run_a)
        b = load_summary(args.run_b)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        print(f"Error: {e}")
        return EXIT_CONFIG

    comparison = compare_summaries(a, b)
    print(f"A: {args.run_a}")
    print(f"B: {args.run_b}")
    print(format_comparison(comparison))
    if args.json:
        _write_json(comparison, Path(args.json))
        print(f"Comparison saved to {args.json}")
    else:
        print(json.dumps(comparison, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    config = None
    if args.config:
        try:
            config = load_scenario(args.config)
        except (FileNotFoundError, ValueError) as e:
            print(f"Error: {e}")
            return EXIT_CONFIG

    print("Running scalar LQR oracle...")
    try:
        result = run_lqr_oracle(config)
    except ValueError as e:
        print(f"Error: {e}")
        return EXIT_CONFIG
    except IntegrationBlowupError as e:
        print(f"Error: {e}")
        return EXIT_NUMERICAL

    print(f"P*        = {result.P_star:.10g}")
    print(f"W_c final = {result.W_c_final:.10g}  (|err| = {result.err_c:.3g}, rel {result.rel_err_c:.3%})")
    print(f"W_a final = {result.W_a_final:.10g}  (|err| = {result.err_a:.3g}, rel {result.rel_err_a:.3%})")
    print("PASSED" if result.passed else f"FAILED: tolerance {result.tolerance:.0%} not met")
    if args.json:
        _write_json(result.to_dict(), Path(args.json))
    return EXIT_OK if result.passed else EXIT_CONFIG


def cmd_check(args: argparse.Namespace) -> int:
    if not Path(args.trajectory).exists():
        print(f"Error: Trajectory file not found: {args.trajectory}")
        return EXIT_CONFIG
    report = check_trajectory_csv(args.trajectory)
    if report.ok:
        print(f"OK: {report.rows} rows")
        return EXIT_OK
    for error in report.errors:
        print(f"  {error}")
    print(f"FAILED: {len(report.errors)} problem(s) in {args.trajectory}")
    return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bastion", description="Safe adaptive optimal control runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one or more scenario files")
    run.add_argument("configs", nargs="+", help="Scenario YAML/JSON file(s)")
    run.add_argument("--out", default="out", help="Output directory (per-scenario subdirectories for several configs)")
    run.add_argument("--dt", type=float, default=None, help="Override the step size")
    run.add_argument("--duration", type=float, default=None, help="Override the run length in seconds")
    run.add_argument("--seed", type=int, default=None, help=f"Grid seed (overrides {SEED_ENV})")
    run.add_argument("--jobs", type=int, default=0, help="Worker processes for several configs (0 = one per CPU)")
    run.add_argument("--log-level", default="standard", choices=["standard", "debug"],
                     help="Telemetry level; debug also records rejected stack candidates")
    run.add_argument("--telemetry-db", default=None, help="Also write events to this SQLite database")
    run.set_defaults(func=cmd_run)

    compare = sub.add_parser("compare", help="Compare two run directories")
    compare.add_argument("run_a")
    compare.add_argument("run_b")
    compare.add_argument("--json", default=None, help="Write the comparison to this file")
    compare.set_defaults(func=cmd_compare)

    oracle = sub.add_parser("oracle-lqr", help="Check the learner against the scalar Riccati solution")
    oracle.add_argument("--config", default=None, help="Scalar LQR scenario (bundled preset if omitted)")
    oracle.add_argument("--json", default=None, help="Write the comparison record to this file")
    oracle.set_defaults(func=cmd_oracle)

    check = sub.add_parser("check", help="Validate a trajectory CSV")
    check.add_argument("trajectory")
    check.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)
