"""
Built-in scenario builders.

The bundled YAML presets under ``scenarios/`` hold the same values; these
builders let tests and the oracle run without touching the filesystem.
"""

from __future__ import annotations

from typing import Sequence

from .schema import ADPConfig, ComponentRef, EstimatorConfig, GridConfig, ScenarioConfig

CASE_STUDY_X0 = [2.5, 4.0]
CASE_STUDY_OBSTACLE = [1.0, 2.0]


def case_study_config(mode: str = "bas-rl", obstacle_center: Sequence[float] = CASE_STUDY_OBSTACLE,
                      name: str | None = None, **overrides) -> ScenarioConfig:
    """
    Planar obstacle-avoidance case study.

    In no-safety mode the learner sees x only, so the basis drops the
    barrier features.
    """
    if name is None:
        name = "case7_bas" if mode == "bas-rl" else "case7_nosafety"
    config = ScenarioConfig(
        name=name,
        mode=mode,
        plant=ComponentRef("case-study-2d"),
        constraint=ComponentRef("circle", {"center": list(obstacle_center), "radius": 0.5}),
        x0=list(CASE_STUDY_X0),
        basis="quadratic-6" if mode == "bas-rl" else "quadratic-3",
    )
    for key, value in overrides.items():
        setattr(config, key, value)
    config.validate()
    return config


def lqr_scalar_config(a: float = -1.0, b: float = 1.0, q: float = 1.0, r: float = 1.0,
                      duration: float = 20.0, dt: float = 1e-3) -> ScenarioConfig:
    """Scalar linear plant with a quadratic value, for comparison with the Riccati solution."""
    config = ScenarioConfig(
        name="lqr_scalar",
        mode="no-safety",
        plant=ComponentRef("scalar-linear", {"a": a, "b": b}),
        # Far-away disk, only monitored
        constraint=ComponentRef("circle", {"center": [3.0], "radius": 0.5}),
        x0=[1.0],
        basis="quadratic-1",
        duration=duration,
        dt=dt,
        estimator=EstimatorConfig(theta0=0.0),
        adp=ADPConfig(k_a1=10.0, k_a2=0.0, beta_c=0.5, Q=q, R=r, W_c0=0.5, W_a0=0.5, Upsilon0=10.0),
        grid=GridConfig(count=100, center=0.0, half_widths=1.0),
    )
    config.validate()
    return config
