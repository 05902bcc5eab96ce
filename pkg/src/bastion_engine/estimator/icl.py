"""
Barrier-state observer and ICL parameter estimator.

Update laws:
    z_hat_dot = Phi grad(h) (Y theta_hat + f + g u) + gamma (z - z_hat)
    phi       = (Phi grad(h) Y)^T z_err + k_theta sum_i sigma_i Y_i^T (X_i - Gfu_i - Y_i theta_hat)
    theta_dot = proj(theta_hat, Gamma phi)
    Gamma_dot = beta_theta Gamma - k_theta Gamma Sigma_Y Gamma   (frozen while projecting)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..core.numerics import as_mat, as_vec, symmetrize
from ..errors import DegenerateGainError
from ..model.barrier import BarrierSpec
from ..model.dynamics import SafetyEmbeddedDynamics
from ..model.plant import PlantModel
from .history import HistoryStack

BOUNDARY_TOL = 1e-9


@dataclass
class EstimatorState:
    theta_hat: np.ndarray
    Gamma: np.ndarray
    z_hat: float = 0.0


@dataclass(frozen=True)
class ICLGains:
    """Observer and estimator gains."""
    gamma_obs: float = 3.0
    k_theta: float = 50.0
    kappa: float = 1.0
    beta_theta: float = 1.0
    theta_bound: float = 2.0


def on_boundary(mu: np.ndarray, theta_bound: float) -> bool:
    """Boundary band of the parameter ball (also true just outside it)."""
    return float(np.linalg.norm(mu)) >= theta_bound * (1.0 - BOUNDARY_TOL)


def project(mu, v, Gamma, theta_bound: float) -> np.ndarray:
    """
    Gamma-weighted projection of the update direction ``v`` at ``mu``.

    Inside the ball, or on its boundary when v points inward, v is returned
    unchanged; otherwise the outward component is removed so mu^T out = 0.
    """
    mu = as_vec(mu, name="mu")
    v = as_vec(v, mu.shape[0], name="v")
    if not on_boundary(mu, theta_bound) or float(mu @ v) <= 0.0:
        return v
    Gamma = as_mat(Gamma, mu.shape[0], mu.shape[0], name="Gamma")
    Gmu = Gamma @ mu
    denom = float(mu @ Gmu)
    if not denom > 0.0:
        raise DegenerateGainError(f"projection needs mu^T Gamma mu > 0, got {denom:.6g}")
    return v - Gmu * (float(mu @ v) / denom)


def barrier_regressor(model: PlantModel, spec: BarrierSpec, x, z: float) -> np.ndarray:
    """Phi(z + beta0) grad(h)(x) Y(x), the barrier row of the augmented regressor."""
    x = as_vec(x, model.n, name="x")
    A, _, _ = SafetyEmbeddedDynamics(model, spec).maps(np.concatenate([x, [float(z)]]))
    return A[-1]


def observer_deriv(est: EstimatorState, x, z: float, u, model: PlantModel,
                   spec: BarrierSpec, gamma_obs: float,
                   maps: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]] = None) -> float:
    """
    Barrier-state observer rate.

    ``maps`` may carry the augmented (A, F, G) already evaluated at (x, z).
    """
    if maps is None:
        x = as_vec(x, model.n, name="x")
        maps = SafetyEmbeddedDynamics(model, spec).maps(np.concatenate([x, [float(z)]]))
    A, F, G = maps
    u = as_vec(u, model.m, name="u")
    predicted = float(A[-1] @ est.theta_hat + F[-1] + G[-1] @ u)
    return predicted + gamma_obs * (float(z) - est.z_hat)


def theta_deriv(est: EstimatorState, stack: HistoryStack, gains: ICLGains,
                z: Optional[float] = None,
                barrier_row: Optional[np.ndarray] = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Projected ICL parameter rate.

    Without a barrier row (safety off) the observer term is dropped.

    Returns:
        (theta_hat_dot, phi)
    """
    phi = gains.k_theta * stack.icl_sum(est.theta_hat)
    if barrier_row is not None and z is not None:
        phi = phi + np.asarray(barrier_row, dtype=float) * (float(z) - est.z_hat)
    theta_dot = project(est.theta_hat, est.Gamma @ phi, est.Gamma, gains.theta_bound)
    return theta_dot, phi


def gamma_deriv(est: EstimatorState, stack: HistoryStack, phi, gains: ICLGains) -> np.ndarray:
    """Least-squares gain rate; zero while the projection is active."""
    theta_hat = est.theta_hat
    Gamma = est.Gamma
    if on_boundary(theta_hat, gains.theta_bound) and float((Gamma @ phi) @ theta_hat) > 0.0:
        return np.zeros_like(Gamma)
    rate = gains.beta_theta * Gamma - gains.k_theta * (Gamma @ stack.Sigma_Y @ Gamma)
    return symmetrize(rate, tol=None)


@dataclass
class GainConditionReport:
    """Advisory check of beta_theta / (k_theta Gamma_bar) > sigma_min(Sigma_Y)."""
    applicable: bool
    holds: Optional[bool] = None
    ratio: Optional[float] = None
    sigma_min: Optional[float] = None
    gamma_bar: Optional[float] = None
    message: str = field(default="")

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "holds": self.holds,
            "ratio": self.ratio,
            "sigma_min": self.sigma_min,
            "gamma_bar": self.gamma_bar,
            "message": self.message,
        }


def check_gain_condition(gains: ICLGains, Gamma_bar: float, stack: HistoryStack) -> GainConditionReport:
    """Report whether the exponential-convergence gain condition holds. Never raises."""
    if stack.is_empty or not stack.min_eig > 0.0:
        return GainConditionReport(applicable=False, message="not yet applicable")
    ratio = gains.beta_theta / (gains.k_theta * Gamma_bar)
    holds = ratio > stack.min_eig
    relation = ">" if holds else "<="
    return GainConditionReport(
        applicable=True,
        holds=bool(holds),
        ratio=float(ratio),
        sigma_min=float(stack.min_eig),
        gamma_bar=float(Gamma_bar),
        message=f"beta_theta/(k_theta*Gamma_bar)={ratio:.6g} {relation} sigma_min={stack.min_eig:.6g}",
    )
