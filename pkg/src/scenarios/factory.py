"""
Component factory: turns scenario configuration into engine objects.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from bastion_engine.adp.grid import build_grid
from bastion_engine.adp.update_laws import ADPGains
from bastion_engine.estimator.icl import ICLGains
from bastion_engine.model.barrier import BarrierSpec
from bastion_engine.model.dynamics import make_dynamics
from bastion_engine.problem import Problem
from bastion_engine.registry import ComponentRegistry

from .schema import ComponentRef, ScenarioConfig


def resolve_vector(value: Any, size: int, path: str) -> np.ndarray:
    """Scalar (broadcast) or length-``size`` list."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return np.full(size, float(arr))
    if arr.shape != (size,):
        raise ValueError(f"{path} must be a scalar or a list of length {size}, got shape {arr.shape}")
    return arr.copy()


def resolve_matrix(value: Any, size: int, path: str, positive_definite: bool = True) -> np.ndarray:
    """Scalar (times identity), length-``size`` diagonal, or ``size`` x ``size`` nested list."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        mat = float(arr) * np.eye(size)
    elif arr.ndim == 1 and arr.shape[0] == size:
        mat = np.diag(arr)
    elif arr.shape == (size, size):
        mat = arr.copy()
    else:
        raise ValueError(
            f"{path} must be a scalar, a length-{size} diagonal or a {size}x{size} matrix, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(mat)):
        raise ValueError(f"{path} must be finite")
    if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12):
        raise ValueError(f"{path} must be symmetric")
    if positive_definite:
        try:
            np.linalg.cholesky(mat)
        except np.linalg.LinAlgError:
            raise ValueError(f"{path} must be positive definite")
    return mat


def _instantiate(ref: ComponentRef, category: str, path: str, **defaults):
    return ComponentRegistry.create(ref.name, category, ref.params, path=path, **defaults)


def build_problem(config: ScenarioConfig) -> Problem:
    """
    Instantiate the plant, safe set, dynamics, basis and grid of a scenario.

    Raises:
        ValueError: unknown component, bad shapes, non-PD weights, or an
            initial state that is not strictly safe in bas-rl mode
    """
    est = config.estimator
    adp = config.adp

    model = _instantiate(config.plant, "plant", "plant", theta_bound=est.theta_bound)
    constraint = _instantiate(config.constraint, "constraint", "constraint")
    center = getattr(constraint, "center", None)
    if center is not None and center.shape != (model.n,):
        raise ValueError(f"constraint.center must have length {model.n}, got {center.shape[0]}")

    spec = None
    if config.with_barrier:
        operator = _instantiate(config.barrier, "barrier", "barrier")
        spec = BarrierSpec(constraint, operator, model.n)
    dynamics = make_dynamics(model, spec)
    d = dynamics.state_dim

    basis = ComponentRegistry.create(config.basis, "basis", path="basis")
    if basis.dim != d:
        raise ValueError(
            f"basis '{config.basis}' expects dimension {basis.dim}, but the {config.mode} learning state has dimension {d}"
        )

    x0 = resolve_vector(config.x0, model.n, "x0")
    if config.with_barrier:
        h0 = float(constraint.h(x0))
        if not h0 > 0:
            raise ValueError(f"x0 must be strictly safe in bas-rl mode, h(x0)={h0:.6g}")

    theta0 = resolve_vector(est.theta0, model.p, "estimator.theta0")
    if np.linalg.norm(theta0) > est.theta_bound:
        raise ValueError(f"estimator.theta0 must satisfy |theta0| <= theta_bound={est.theta_bound}")

    grid_cfg = config.grid
    center_x = resolve_vector(grid_cfg.center, model.n, "grid.center")
    half = resolve_vector(grid_cfg.half_widths, model.n, "grid.half_widths")
    if np.any(half < 0):
        raise ValueError("grid.half_widths must be non-negative")
    lo, hi = center_x - half, center_x + half
    if config.with_barrier:
        lo = np.append(lo, grid_cfg.z_range[0])
        hi = np.append(hi, grid_cfg.z_range[1])
    grid = build_grid(grid_cfg.count, lo, hi, seed=grid_cfg.seed,
                      beta0=spec.beta0 if spec is not None else None)

    return Problem(
        name=config.name,
        model=model,
        constraint=constraint,
        spec=spec,
        dynamics=dynamics,
        basis=basis,
        grid=grid,
        x0=x0,
        theta0=theta0,
        Gamma0=resolve_matrix(est.Gamma0, model.p, "estimator.Gamma0"),
        z_hat0=float(est.z_hat0),
        W_c0=resolve_vector(adp.W_c0, basis.L, "adp.W_c0"),
        W_a0=resolve_vector(adp.W_a0, basis.L, "adp.W_a0"),
        Upsilon0=resolve_matrix(adp.Upsilon0, basis.L, "adp.Upsilon0"),
        Q=resolve_matrix(adp.Q, d, "adp.Q"),
        R=resolve_matrix(adp.R, model.m, "adp.R"),
        icl=ICLGains(
            gamma_obs=est.gamma_obs, k_theta=est.k_theta, kappa=est.kappa,
            beta_theta=est.beta_theta, theta_bound=est.theta_bound,
        ),
        adp=ADPGains(
            nu=adp.nu, k_c1=adp.k_c1, k_c2=adp.k_c2, k_a1=adp.k_a1, k_a2=adp.k_a2,
            beta_c=adp.beta_c, upsilon_floor=adp.upsilon_floor, upsilon_ceiling=adp.upsilon_ceiling,
        ),
        stack_capacity=est.stack_capacity,
        delta=est.delta,
        window=est.window,
        capture_interval=est.capture_interval,
        duration=config.duration,
        dt=config.dt,
        log_every=config.log_every,
        chi=config.chi,
    )
