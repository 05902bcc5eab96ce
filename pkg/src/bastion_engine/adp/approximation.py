"""
Critic, actor and Bellman-error evaluation.

    V_hat(s)  = W_c^T sigma(s)
    u_hat(s)  = -1/2 R^-1 G(s)^T grad(sigma)(s)^T W_a
    delta     = s^T Q s + u^T R u + W_c^T grad(sigma)(s) (A(s) theta_hat + F(s) + G(s) u)
    omega     = grad(sigma)(s) (A theta_hat + F + G u),  rho = 1 + nu omega^T omega

``dynamics`` is a PlantDynamics or SafetyEmbeddedDynamics; everything here
broadcasts over leading batch axes so one call covers the whole grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .basis import Basis
from .grid import ExtrapolationGrid, GridTerms, prepare_grid


@dataclass
class CriticState:
    W_c_hat: np.ndarray
    Upsilon: np.ndarray


@dataclass
class ActorState:
    W_a_hat: np.ndarray


@dataclass
class BellmanTerms:
    delta: float
    omega: np.ndarray
    rho: float
    u: np.ndarray


@dataclass
class ExtrapolatedBellman:
    """Per-point Bellman terms over the grid, arrays indexed by grid point k."""
    deltas: np.ndarray    # (M,)
    omegas: np.ndarray    # (M, L)
    rhos: np.ndarray      # (M,)
    G_sigmas: np.ndarray  # (M, L, L)

    @property
    def M(self) -> int:
        return int(self.deltas.shape[0])

    def __len__(self) -> int:
        return self.M

    def __iter__(self) -> Iterator[tuple[float, np.ndarray, float]]:
        for k in range(self.M):
            yield float(self.deltas[k]), self.omegas[k], float(self.rhos[k])

    def excitation(self) -> np.ndarray:
        """(1/M) sum_k omega_k omega_k^T / rho_k^2."""
        scaled = self.omegas / self.rhos[:, None]
        return scaled.T @ scaled / self.M


def _as_state(s) -> np.ndarray:
    if hasattr(s, "as_array"):
        return s.as_array()
    return np.asarray(s, dtype=float)


def critic_value(basis: Basis, critic: CriticState, s) -> float:
    return float(basis.sigma(_as_state(s)) @ critic.W_c_hat)


def policy(grad: np.ndarray, G: np.ndarray, W_a: np.ndarray, R: np.ndarray) -> np.ndarray:
    """-1/2 R^-1 G^T grad^T W_a, batched over leading axes."""
    costate = np.einsum("...ld,l->...d", grad, W_a)
    return -0.5 * np.einsum("ij,...dj,...d->...i", np.linalg.inv(R), G, costate)


def actor_control(basis: Basis, actor: ActorState, s, G, R) -> np.ndarray:
    return policy(basis.grad(_as_state(s)), np.asarray(G, dtype=float), actor.W_a_hat, R)


def applied_control(actor: ActorState, basis: Basis, s, dynamics, R) -> np.ndarray:
    """The control fed to the plant: the actor policy at the current state."""
    _, _, G = dynamics.maps(_as_state(s))
    return actor_control(basis, actor, s, G, R)


def bellman_terms(grad, W_c, W_a, A, F, G, theta_hat, R, nu: float,
                  state_cost) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Batched (delta, omega, rho, u) from pre-evaluated maps."""
    u = policy(grad, G, W_a, R)
    s_dot = np.einsum("...dp,p->...d", A, theta_hat) + F + np.einsum("...dm,...m->...d", G, u)
    omega = np.einsum("...ld,...d->...l", grad, s_dot)
    delta = state_cost + np.einsum("...i,ij,...j->...", u, R, u) + omega @ W_c
    rho = 1.0 + nu * np.sum(omega * omega, axis=-1)
    return delta, omega, rho, u


def bellman_error(basis: Basis, critic: CriticState, actor: ActorState, s, theta_hat,
                  dynamics, Q, R, nu: float = 2.0) -> BellmanTerms:
    """Bellman error at one state with the current weights and estimate."""
    s = _as_state(s)
    A, F, G = dynamics.maps(s)
    delta, omega, rho, u = bellman_terms(
        basis.grad(s), critic.W_c_hat, actor.W_a_hat, A, F, G,
        np.asarray(theta_hat, dtype=float), R, nu, float(s @ Q @ s),
    )
    return BellmanTerms(delta=float(delta), omega=omega, rho=float(rho), u=u)


def extrapolated_bellman(grid: ExtrapolationGrid, basis: Basis, critic: CriticState,
                         actor: ActorState, theta_hat, dynamics, Q, R, nu: float = 2.0,
                         terms: Optional[GridTerms] = None) -> ExtrapolatedBellman:
    """
    Bellman terms at every grid point.

    ``terms`` caches the state-only grid quantities; it is built on the fly
    when omitted.
    """
    if terms is None:
        terms = prepare_grid(grid, dynamics, basis, np.asarray(Q, dtype=float), np.asarray(R, dtype=float))
    deltas, omegas, rhos, _ = bellman_terms(
        terms.grad, critic.W_c_hat, actor.W_a_hat, terms.A, terms.F, terms.G,
        np.asarray(theta_hat, dtype=float), R, nu, terms.state_cost,
    )
    return ExtrapolatedBellman(deltas=deltas, omegas=omegas, rhos=rhos, G_sigmas=terms.G_sigma)


def hjb_residual(basis: Basis, W, s, theta_hat, dynamics, Q, R) -> np.ndarray:
    """
    Reduced HJB residual of V = W^T sigma, batched:

        grad(V)(A theta_hat + F) + s^T Q s - 1/4 grad(V) G R^-1 G^T grad(V)^T
    """
    s = _as_state(s)
    A, F, G = dynamics.maps(s)
    dV = np.einsum("...ld,l->...d", basis.grad(s), np.asarray(W, dtype=float))
    drift = np.einsum("...dp,p->...d", A, np.asarray(theta_hat, dtype=float)) + F
    gv = np.einsum("...dm,...d->...m", G, dV)
    quad = np.einsum("...i,ij,...j->...", gv, np.linalg.inv(R), gv)
    return np.einsum("...d,...d->...", dV, drift) + np.einsum("...i,ij,...j->...", s, Q, s) - 0.25 * quad
