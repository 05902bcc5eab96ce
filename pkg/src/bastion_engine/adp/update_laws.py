"""
Critic, least-squares gain and actor update laws.

The extrapolation sums use the grid count M both as the number of terms
and as the normalizer, and the bare critic gain of the Upsilon and actor
laws is read as k_c2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.numerics import symmetrize
from .approximation import ActorState, CriticState, ExtrapolatedBellman


@dataclass(frozen=True)
class ADPGains:
    nu: float = 2.0
    k_c1: float = 1.0
    k_c2: float = 1.0
    k_a1: float = 2.0
    k_a2: float = 1.0
    beta_c: float = 0.1
    upsilon_floor: float = 1e-6
    upsilon_ceiling: float = 1000.0


@dataclass(frozen=True)
class UpsilonClamp:
    """Which parts of the Upsilon law are switched off for the current step."""
    suspend_growth: bool = False
    suspend_shrink: bool = False


def upsilon_clamp(Upsilon: np.ndarray, gains: ADPGains) -> UpsilonClamp:
    """
    Decide the Upsilon clamp at a step boundary.

    Growth stops once lambda_max reaches the ceiling; the data terms stop
    once lambda_min reaches the floor. Both tests are Cholesky factorizations
    of the shifted matrix, which succeed exactly when the bound is strict.
    """
    eye = np.eye(Upsilon.shape[0])
    return UpsilonClamp(
        suspend_growth=not _is_pd(gains.upsilon_ceiling * eye - Upsilon),
        suspend_shrink=not _is_pd(Upsilon - gains.upsilon_floor * eye),
    )


def _is_pd(M: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(symmetrize(M, tol=None))
    except np.linalg.LinAlgError:
        return False
    return True


def _grid_count(extrapolated: Optional[ExtrapolatedBellman]) -> int:
    return 0 if extrapolated is None else extrapolated.M


def critic_deriv(critic: CriticState, delta: float, omega: np.ndarray, rho: float,
                 extrapolated: Optional[ExtrapolatedBellman], gains: ADPGains) -> np.ndarray:
    Ups = critic.Upsilon
    rate = -gains.k_c1 * (Ups @ (omega / rho)) * delta
    M = _grid_count(extrapolated)
    if M and gains.k_c2:
        weighted = (extrapolated.omegas / extrapolated.rhos[:, None]).T @ extrapolated.deltas
        rate = rate - (gains.k_c2 / M) * (Ups @ weighted)
    return rate


def upsilon_deriv(critic: CriticState, omega: np.ndarray, rho: float,
                  extrapolated: Optional[ExtrapolatedBellman], gains: ADPGains,
                  clamp: UpsilonClamp = UpsilonClamp()) -> np.ndarray:
    Ups = critic.Upsilon
    rate = np.zeros_like(Ups)
    if not clamp.suspend_growth:
        rate += gains.beta_c * Ups
    if not clamp.suspend_shrink:
        w = omega / rho
        info = gains.k_c1 * np.outer(w, w)
        M = _grid_count(extrapolated)
        if M and gains.k_c2:
            info = info + (gains.k_c2 / M) * (
                (extrapolated.omegas / extrapolated.rhos[:, None]).T
                @ (extrapolated.omegas / extrapolated.rhos[:, None])
            )
        rate -= Ups @ info @ Ups
    return symmetrize(rate, tol=None)


def actor_deriv(actor: ActorState, critic: CriticState, omega: np.ndarray, rho: float,
                G_sigma: np.ndarray, extrapolated: Optional[ExtrapolatedBellman],
                gains: ADPGains) -> np.ndarray:
    """
    Actor rate: consensus pull toward the critic, leakage, and the
    cross terms that cancel the policy mismatch in the Bellman error.
    """
    W_a = actor.W_a_hat
    W_c = critic.W_c_hat
    rate = -gains.k_a1 * (W_a - W_c) - gains.k_a2 * W_a
    rate = rate + (gains.k_c1 / (4.0 * rho)) * (G_sigma.T @ W_a) * float(omega @ W_c)
    M = _grid_count(extrapolated)
    if M and gains.k_c2:
        coeff = (extrapolated.omegas @ W_c) / extrapolated.rhos
        cross = np.einsum("k,kij,i->j", coeff, extrapolated.G_sigmas, W_a)
        rate = rate + (gains.k_c2 / (4.0 * M)) * cross
    return rate
