from __future__ import annotations

import numpy as np

from bastion_engine.estimator.history import HistoryEntry
from bastion_engine.model import CaseStudyPlant, CircularObstacle, InverseBarrier, BarrierSpec
from bastion_engine.simulation import Simulation
from scenarios.factory import build_problem
from scenarios.presets import case_study_config, lqr_scalar_config
from scenarios.schema import ADPConfig, ComponentRef, EstimatorConfig, GridConfig, ScenarioConfig
from telemetry.config import LogConfig


def case_study_spec(center=(1.0, 2.0), K: float = 0.01) -> BarrierSpec:
    """Barrier spec of the planar case study."""
    return BarrierSpec(CircularObstacle(center=center, radius=0.5), InverseBarrier(K=K), n=2)


def case_study_plant() -> CaseStudyPlant:
    return CaseStudyPlant()


def build_case_study(mode: str = "bas-rl", duration: float = 1.0, dt: float = 1e-3,
                     name: str | None = None, **overrides) -> ScenarioConfig:
    """Case-study scenario, shortened for unit-speed tests."""
    return case_study_config(mode=mode, name=name, duration=duration, dt=dt, **overrides)


def build_scalar(a: float = -1.0, b: float = 1.0, duration: float = 1.0, dt: float = 1e-3,
                 x0: float = 1.0, estimator: EstimatorConfig | None = None,
                 adp: ADPConfig | None = None, grid: GridConfig | None = None,
                 name: str = "scalar_test") -> ScenarioConfig:
    """Minimal valid scalar-linear scenario without a barrier.

    - Far-away obstacle, monitored only
    - Small grid to keep runs fast
    """
    config = ScenarioConfig(
        name=name,
        mode="no-safety",
        plant=ComponentRef("scalar-linear", {"a": a, "b": b}),
        constraint=ComponentRef("circle", {"center": [3.0], "radius": 0.5}),
        x0=[x0],
        basis="quadratic-1",
        duration=duration,
        dt=dt,
        estimator=estimator or EstimatorConfig(),
        adp=adp or ADPConfig(),
        grid=grid or GridConfig(count=10, center=0.0, half_widths=1.0),
    )
    config.validate()
    return config


def build_lqr(duration: float = 20.0) -> ScenarioConfig:
    return lqr_scalar_config(duration=duration)


def make_sim(config: ScenarioConfig, log_config: LogConfig | None = None) -> Simulation:
    """Create a Simulation from a scenario (standard telemetry, no database)."""
    return Simulation(
        build_problem(config),
        log_config=log_config or LogConfig.standard(),
        config_dict=config.to_dict(),
        config_hash=config.config_hash(),
    )


def entry(Y, X=None, Gfu=None, kappa: float = 1.0, t: float = 0.0) -> HistoryEntry:
    """History entry with a given integrated regressor (X, Gfu default to zero)."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    n = Y.shape[0]
    X = np.zeros(n) if X is None else np.asarray(X, dtype=float)
    Gfu = np.zeros(n) if Gfu is None else np.asarray(Gfu, dtype=float)
    sigma = 1.0 / (1.0 + kappa * float(np.sum(Y * Y)))
    return HistoryEntry(X=X, Y=Y, Gfu=Gfu, sigma=sigma, t=t)
