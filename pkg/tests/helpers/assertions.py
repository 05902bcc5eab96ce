from __future__ import annotations

from typing import Callable

import numpy as np

from telemetry.trajectory import TrajectoryLog


def assert_deterministic(build_sim: Callable[[], object], steps: int):
    """Assert that two fresh simulations produce identical log rows."""
    sim1 = build_sim()
    sim2 = build_sim()
    for _ in range(steps):
        sim1.step()
        sim2.step()
    np.testing.assert_array_equal(sim1.log.rows, sim2.log.rows)


def assert_projection_holds(log: TrajectoryLog, bound: float):
    """Every logged theta_hat lies inside the parameter ball."""
    theta = log.columns("th", log.p)
    norms = np.linalg.norm(theta, axis=1)
    assert np.all(norms <= bound), f"max |theta_hat| = {norms.max()!r} exceeds {bound}"


def assert_nondecreasing(values, start: int = 0):
    values = np.asarray(values, dtype=float)[start:]
    drops = np.diff(values)
    assert np.all(drops >= 0.0), f"sequence decreases by {drops.min()!r}"


def assert_finite_log(log: TrajectoryLog):
    assert np.all(np.isfinite(log.rows)), "log contains NaN or Inf"
