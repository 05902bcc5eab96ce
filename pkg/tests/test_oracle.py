"""
Tests for the scalar Riccati oracle.
"""

import math

import numpy as np
import pytest
from scipy.linalg import solve_continuous_are

from bastion_engine.oracle import run_lqr_oracle, scalar_riccati

from tests.helpers import builders


def test_riccati_examples():
    assert scalar_riccati(0.0, 1.0, 1.0, 1.0) == pytest.approx(1.0)
    assert scalar_riccati(-1.0, 1.0, 1.0, 1.0) == pytest.approx(math.sqrt(2.0) - 1.0)
    assert scalar_riccati(-1.0, 1.0, 0.0, 1.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("a,b,q,r", [
    (-1.0, 1.0, 1.0, 1.0),
    (0.5, 2.0, 3.0, 0.5),
    (-3.0, 0.2, 10.0, 4.0),
    (1.0, -1.0, 1.0, 1.0),
])
def test_riccati_matches_scipy(a, b, q, r):
    expected = solve_continuous_are([[a]], [[b]], [[q]], [[r]])[0, 0]
    assert scalar_riccati(a, b, q, r) == pytest.approx(expected, rel=1e-9)


def test_riccati_solves_equation():
    a, b, q, r = 0.3, 1.5, 2.0, 0.7
    P = scalar_riccati(a, b, q, r)
    assert P > 0.0
    assert 2.0 * a * P - (b * b / r) * P * P + q == pytest.approx(0.0, abs=1e-12)


def test_riccati_rejects_bad_inputs():
    with pytest.raises(ValueError):
        scalar_riccati(-1.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        scalar_riccati(-1.0, 1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        scalar_riccati(-1.0, 1.0, 1.0, 0.0)


def test_oracle_rejects_planar_plant():
    with pytest.raises(ValueError, match="scalar-linear"):
        run_lqr_oracle(builders.build_case_study(mode="no-safety"))


def test_oracle_rejects_barrier_mode():
    config = builders.build_scalar()
    config.mode = "bas-rl"
    config.basis = "quadratic-3"
    config.validate()
    with pytest.raises(ValueError, match="no-safety"):
        run_lqr_oracle(config)


def _value_iteration_coefficient(a: float, b: float, q: float, r: float, dt: float = 0.01) -> float:
    """Quadratic coefficient of the value function found by brute-force dynamic programming on a grid."""
    xs = np.linspace(-2.0, 2.0, 401)
    us = np.linspace(-2.0, 2.0, 401)
    X, U = xs[:, None], us[None, :]
    nxt = X + (a * X + b * U) * dt
    stage = (q * X * X + r * U * U) * dt
    V = np.zeros_like(xs)
    for _ in range(5000):
        V_new = np.min(stage + np.interp(nxt, xs, V), axis=1)
        if np.max(np.abs(V_new - V)) < 1e-10:
            break
        V = V_new
    inner = np.abs(xs) <= 1.0
    # V ~ P x^2 + c; the offset absorbs interpolation bias
    design = np.column_stack([xs[inner] ** 2, np.ones(inner.sum())])
    coeff, *_ = np.linalg.lstsq(design, V_new[inner], rcond=None)
    return float(coeff[0])


def test_riccati_agrees_with_value_iteration():
    config = builders.build_lqr()
    a, b = config.plant.params["a"], config.plant.params["b"]
    P_grid = _value_iteration_coefficient(a, b, config.adp.Q, config.adp.R)
    assert P_grid == pytest.approx(scalar_riccati(a, b, config.adp.Q, config.adp.R), rel=0.02)


@pytest.mark.slow
def test_oracle_weights_reach_riccati_solution():
    result = run_lqr_oracle(builders.build_lqr())
    assert result.P_star == pytest.approx(math.sqrt(2.0) - 1.0)
    assert result.passed, result.to_dict()
    assert np.isfinite(result.W_c_final)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
