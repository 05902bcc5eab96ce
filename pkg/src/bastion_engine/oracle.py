"""
Scalar LQR oracle for the actor-critic learner.

For x_dot = a x + b u with cost q x^2 + r u^2 the value is P x^2 where P
is the positive root of 2 a P - (b^2 / r) P^2 + q = 0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Optional

from .model.plant import ScalarLinearPlant

REL_TOLERANCE = 0.02


def scalar_riccati(a: float, b: float, q: float, r: float) -> float:
    """Stabilizing solution of the scalar algebraic Riccati equation."""
    if b == 0.0:
        raise ValueError("scalar Riccati needs b != 0")
    if q < 0.0 or r <= 0.0:
        raise ValueError(f"need q >= 0 and r > 0, got q={q}, r={r}")
    return (a + math.sqrt(a * a + b * b * q / r)) * r / (b * b)


@dataclass
class OracleComparison:
    a: float
    b: float
    q: float
    r: float
    P_star: float
    W_c_final: float
    W_a_final: float
    err_c: float
    err_a: float
    rel_err_c: float
    rel_err_a: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def run_lqr_oracle(config=None, tolerance: float = REL_TOLERANCE) -> OracleComparison:
    """
    Run the learner on a scalar linear plant and compare with P*.

    Args:
        config: ScenarioConfig with a ``scalar-linear`` plant and ``quadratic-1``
            basis; the bundled oracle preset when omitted
    """
    from scenarios.factory import build_problem
    from scenarios.presets import lqr_scalar_config

    from .simulation import run_scenario

    if config is None:
        config = lqr_scalar_config()
    problem = build_problem(config)
    if problem.with_barrier:
        raise ValueError("LQR oracle runs without barrier augmentation (mode: no-safety)")
    if not isinstance(problem.model, ScalarLinearPlant) or problem.basis.L != 1:
        raise ValueError("LQR oracle needs a scalar-linear plant with a single quadratic feature")

    a, b = problem.model.a, problem.model.b
    q, r = float(problem.Q[0, 0]), float(problem.R[0, 0])
    P_star = scalar_riccati(a, b, q, r)

    result = run_scenario(config)
    W_c = float(result.final.W_c[0])
    W_a = float(result.final.W_a[0])
    err_c, err_a = abs(W_c - P_star), abs(W_a - P_star)
    scale = abs(P_star) if P_star != 0.0 else 1.0
    return OracleComparison(
        a=a, b=b, q=q, r=r, P_star=P_star,
        W_c_final=W_c, W_a_final=W_a,
        err_c=err_c, err_a=err_a,
        rel_err_c=err_c / scale, rel_err_a=err_a / scale,
        tolerance=tolerance,
        passed=bool(err_c / scale <= tolerance and err_a / scale <= tolerance),
    )
