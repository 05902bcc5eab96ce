"""
Fixed Bellman-error extrapolation grid.

Points are laid out once per run with a Halton sequence inside a box in
s-coordinates and never move, so every state-only quantity at the grid
(A, F, G, grad sigma, s^T Q s, G_sigma) is evaluated once and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from ..core.numerics import as_vec
from .basis import Basis

OMEGA_INFLATION = 1.5


@dataclass
class ExtrapolationGrid:
    """M fixed points inside [lo, hi] (rows of ``points``)."""
    points: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    seed: Optional[int] = None

    @property
    def M(self) -> int:
        return int(self.points.shape[0])

    def omega_contains(self, s) -> bool:
        """Whether s lies in the approximation region (the box inflated by 50%)."""
        center = 0.5 * (self.lo + self.hi)
        half = 0.5 * (self.hi - self.lo) * OMEGA_INFLATION
        return bool(np.all(np.abs(np.asarray(s, dtype=float) - center) <= half))


def build_grid(count: int, lo: Sequence[float], hi: Sequence[float],
               seed: Optional[int] = None, beta0: Optional[float] = None) -> ExtrapolationGrid:
    """
    Halton layout of ``count`` points in the box [lo, hi].

    With ``beta0`` set, the last coordinate is the barrier state and points
    with z + beta0 <= 0 are dropped.

    Raises:
        ValueError: bad box or no point survives the domain filter
    """
    lo = as_vec(lo, name="grid.lo")
    hi = as_vec(hi, lo.shape[0], name="grid.hi")
    if count < 1:
        raise ValueError(f"grid.count must be at least 1, got {count}")
    if np.any(hi < lo):
        raise ValueError("grid box must have hi >= lo in every coordinate")
    d = lo.shape[0]

    if count == 1:
        unit = np.full((1, d), 0.5)
    elif seed is not None:
        sampler = qmc.Halton(d=d, scramble=True, seed=np.random.default_rng(seed))
        unit = sampler.random(count)
    else:
        sampler = qmc.Halton(d=d, scramble=False)
        sampler.fast_forward(1)  # skip the all-zero corner
        unit = sampler.random(count)

    points = lo + unit * (hi - lo)
    if beta0 is not None:
        points = points[points[:, -1] + beta0 > 0.0]
    if points.shape[0] == 0:
        raise ValueError("no extrapolation point lies inside the barrier domain")
    return ExtrapolationGrid(points=points, lo=lo, hi=hi, seed=seed)


@dataclass
class GridTerms:
    """State-only quantities at the grid points, evaluated once per run."""
    A: np.ndarray        # (M, d, p)
    F: np.ndarray        # (M, d)
    G: np.ndarray        # (M, d, m)
    grad: np.ndarray     # (M, L, d)
    state_cost: np.ndarray  # (M,)
    G_sigma: np.ndarray  # (M, L, L)


def prepare_grid(grid: ExtrapolationGrid, dynamics, basis: Basis, Q: np.ndarray,
                 R: np.ndarray) -> GridTerms:
    A, F, G = dynamics.maps(grid.points)
    grad = basis.grad(grid.points)
    state_cost = np.einsum("ki,ij,kj->k", grid.points, Q, grid.points)
    G_sigma = control_metric(grad, G, R)
    return GridTerms(A=A, F=F, G=G, grad=grad, state_cost=state_cost, G_sigma=G_sigma)


def control_metric(grad: np.ndarray, G: np.ndarray, R: np.ndarray) -> np.ndarray:
    """G_sigma = grad(sigma) G R^-1 G^T grad(sigma)^T, batched."""
    R_inv = np.linalg.inv(R)
    gs = np.einsum("...ld,...dm->...lm", grad, G)
    return np.einsum("...lm,mn,...kn->...lk", gs, R_inv, gs)
