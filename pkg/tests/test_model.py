"""
Tests for the plant, the safe set and the barrier-state augmentation.
"""

import math

import numpy as np
import pytest

from bastion_engine.core.numerics import rk4_step
from bastion_engine.errors import BarrierDomainError, UnsafeStateError
from bastion_engine.model import (
    AugState, BarrierSpec, CaseStudyPlant, CircularObstacle, InverseBarrier, ScalarLinearPlant,
    aug_maps, augment, eval_beta, eval_phi, is_safe, make_dynamics, plant_deriv,
)
from bastion_engine.model.dynamics import PlantDynamics, SafetyEmbeddedDynamics

from tests.helpers.builders import case_study_plant, case_study_spec


def _point_with_margin(spec: BarrierSpec, h: float) -> np.ndarray:
    """State to the right of the obstacle centre with h(x) = h."""
    r = spec.constraint.radius
    return spec.constraint.center + np.array([math.sqrt(r * r + h), 0.0])


# --- barrier -----------------------------------------------------------------

def test_eval_beta_at_unit_margin():
    spec = case_study_spec()
    x = _point_with_margin(spec, 1.0)
    assert eval_beta(spec, x) == pytest.approx(0.01, abs=1e-12)


def test_beta0_is_barrier_at_origin():
    spec = case_study_spec()
    assert spec.beta0 == pytest.approx(0.01 / 4.75)
    assert eval_beta(spec, np.zeros(2)) == pytest.approx(spec.beta0)


def test_beta_diverges_near_boundary():
    spec = case_study_spec()
    x = _point_with_margin(spec, 1e-6)
    assert eval_beta(spec, x) == pytest.approx(1e4, rel=1e-6)


def test_eval_beta_rejects_unsafe_state():
    spec = case_study_spec()
    with pytest.raises(UnsafeStateError) as excinfo:
        eval_beta(spec, [1.0, 2.0])
    assert excinfo.value.h == pytest.approx(-0.25)


def test_origin_must_be_safe():
    with pytest.raises(UnsafeStateError):
        BarrierSpec(CircularObstacle(center=(0.0, 0.0), radius=0.5), InverseBarrier(), n=2)


def test_eval_phi_matches_finite_difference():
    spec = case_study_spec()
    B = spec.operator.value
    step = 1e-6
    dB = (B(1.0 + step) - B(1.0 - step)) / (2.0 * step)
    assert eval_phi(spec, 0.01) == pytest.approx(-0.01, abs=1e-15)
    assert eval_phi(spec, 0.01) == pytest.approx(dB, rel=1e-6)


def test_eval_phi_unit_gain():
    spec = case_study_spec(K=1.0)
    assert eval_phi(spec, 1.0) == pytest.approx(-1.0)


@pytest.mark.parametrize("beta", [0.0, -0.5])
def test_eval_phi_domain(beta):
    with pytest.raises(BarrierDomainError):
        eval_phi(case_study_spec(), beta)


def test_inverse_barrier_requires_positive_gain():
    with pytest.raises(ValueError):
        InverseBarrier(K=0.0)


def test_augment_origin():
    s = augment(case_study_spec(), np.zeros(2))
    assert s.z == 0.0


def test_augment_case_study_initial_state():
    s = augment(case_study_spec(), [2.5, 4.0])
    assert s.z == pytest.approx(0.01 / 6.0 - 0.01 / 4.75, abs=1e-15)
    np.testing.assert_array_equal(s.x, [2.5, 4.0])


def test_augment_on_origin_level_set():
    """The reflection of the origin through the centre has h(x) = h(0)."""
    spec = case_study_spec()
    s = augment(spec, 2.0 * spec.constraint.center)
    assert s.z == pytest.approx(0.0, abs=1e-15)


def test_aug_state_array_round_trip():
    s = AugState(x=np.array([1.0, 2.0]), z=0.5)
    back = AugState.from_array(s.as_array())
    np.testing.assert_array_equal(back.x, s.x)
    assert back.z == s.z


def test_is_safe_examples():
    spec = case_study_spec()
    assert is_safe(spec, [2.5, 4.0]) == (True, pytest.approx(6.0))
    safe, margin = is_safe(spec, [1.0, 2.0])
    assert not safe and margin == pytest.approx(-0.25)
    safe, margin = is_safe(spec, [1.5, 2.0])
    assert safe and margin == 0.0


# --- plant -------------------------------------------------------------------

def test_plant_deriv_vanishes_at_origin():
    np.testing.assert_array_equal(plant_deriv(case_study_plant(), [0.0, 0.0], [0.0]), [0.0, 0.0])


def test_plant_deriv_case_study_drift():
    np.testing.assert_allclose(plant_deriv(case_study_plant(), [1.0, 1.0], [0.0]), [-2.0, -1.5])


def test_plant_deriv_case_study_input():
    np.testing.assert_allclose(plant_deriv(case_study_plant(), [0.0, 0.0], [1.0]), [0.0, 3.0])


def test_plant_maps_are_batched():
    model = case_study_plant()
    xs = np.array([[1.0, 1.0], [0.0, 0.0], [0.5, -2.0]])
    us = np.array([[0.0], [1.0], [0.3]])
    batched = plant_deriv(model, xs, us)
    for x, u, row in zip(xs, us, batched):
        np.testing.assert_allclose(plant_deriv(model, x, u), row)


def test_plant_rejects_parameters_outside_bound():
    with pytest.raises(ValueError):
        CaseStudyPlant(theta_true=(-2.0, -2.0, 0.0, 0.0), theta_bound=2.0)


def test_scalar_plant():
    model = ScalarLinearPlant(a=-1.0, b=2.0)
    assert model.a == -1.0
    np.testing.assert_allclose(plant_deriv(model, [3.0], [1.0]), [-1.0])
    with pytest.raises(ValueError):
        ScalarLinearPlant(b=0.0)


# --- augmented dynamics -------------------------------------------------------

def test_aug_maps_vanish_at_origin():
    A, F, G = aug_maps(case_study_plant(), case_study_spec(), AugState(x=np.zeros(2), z=0.0))
    assert A.shape == (3, 4) and F.shape == (3,) and G.shape == (3, 1)
    np.testing.assert_array_equal(A, np.zeros((3, 4)))
    np.testing.assert_array_equal(F, np.zeros(3))


def test_aug_maps_input_row():
    model = case_study_plant()
    spec = case_study_spec()
    x = np.array([0.3, -0.7])
    z = 0.001
    _, _, G = aug_maps(model, spec, AugState(x=x, z=z))
    arg = z + spec.beta0
    phi = -(arg * arg) / spec.K
    expected = phi * (spec.grad_h(x) @ model.input_matrix(x))
    np.testing.assert_allclose(G[-1], expected, rtol=1e-14)
    np.testing.assert_array_equal(G[:-1], model.input_matrix(x))


def test_aug_maps_outside_cone():
    spec = case_study_spec()
    with pytest.raises(BarrierDomainError):
        aug_maps(case_study_plant(), spec, AugState(x=np.zeros(2), z=-2.0 * spec.beta0))


def test_barrier_row_is_time_derivative_of_beta():
    """Central difference of beta along an RK4 trajectory matches the bottom row."""
    model = case_study_plant()
    spec = case_study_spec()
    u = np.array([0.4])
    dt = 1e-3

    def field(t, x):
        return plant_deriv(model, x, u)

    x0 = np.array([2.5, 4.0])
    x1 = rk4_step(field, 0.0, x0, dt)
    x2 = rk4_step(field, dt, x1, dt)
    fd = (eval_beta(spec, x2) - eval_beta(spec, x0)) / (2.0 * dt)

    z1 = augment(spec, x1).z
    A, F, G = aug_maps(model, spec, AugState(x=x1, z=z1))
    analytic = float(A[-1] @ model.theta_true + F[-1] + G[-1] @ u)
    assert analytic == pytest.approx(fd, abs=1e-6)


def test_barrier_state_stays_on_graph():
    """Integrating x and z jointly keeps z = beta(x) - beta0 for 10 s."""
    model = case_study_plant()
    spec = case_study_spec()
    dyn = SafetyEmbeddedDynamics(model, spec)

    def control(x):
        return np.array([-2.0 * x[1]])

    def field(t, s):
        A, F, G = dyn.maps(s)
        return A @ model.theta_true + F + G @ control(s[:-1])

    x0 = np.array([-0.5, 0.5])
    s = np.append(x0, augment(spec, x0).z)
    dt = 1e-3
    worst = 0.0
    for k in range(10000):
        s = rk4_step(field, k * dt, s, dt)
        on_graph = eval_beta(spec, s[:-1]) - spec.beta0
        worst = max(worst, abs(s[-1] - on_graph))
    assert worst < 1e-6


def test_make_dynamics_selects_mode():
    model = case_study_plant()
    assert isinstance(make_dynamics(model), PlantDynamics)
    dyn = make_dynamics(model, case_study_spec())
    assert isinstance(dyn, SafetyEmbeddedDynamics)
    assert dyn.state_dim == 3


def test_plant_dynamics_maps_are_plant_maps():
    model = case_study_plant()
    x = np.array([0.2, 0.9])
    A, F, G = PlantDynamics(model).maps(x)
    np.testing.assert_array_equal(A, model.regressor(x))
    np.testing.assert_array_equal(F, model.drift(x))
    np.testing.assert_array_equal(G, model.input_matrix(x))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
