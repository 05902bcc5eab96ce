"""
Closed-loop state bundle.

The plant, barrier state, observer, estimator and actor-critic states are
integrated jointly by RK4, so they are packed into one flat vector. The
layout is fixed per run:

    x (n) | z, z_hat (barrier mode only) | theta_hat (p) | Gamma (p*p)
          | W_c (L) | Upsilon (L*L) | W_a (L)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError


@dataclass
class LoopState:
    """Unpacked view of the bundle. Matrices are full (not triangular)."""
    x: np.ndarray
    z: float
    z_hat: float
    theta_hat: np.ndarray
    Gamma: np.ndarray
    W_c: np.ndarray
    Upsilon: np.ndarray
    W_a: np.ndarray

    @property
    def z_err(self) -> float:
        return self.z - self.z_hat

    def copy(self) -> "LoopState":
        return LoopState(
            x=self.x.copy(), z=self.z, z_hat=self.z_hat,
            theta_hat=self.theta_hat.copy(), Gamma=self.Gamma.copy(),
            W_c=self.W_c.copy(), Upsilon=self.Upsilon.copy(), W_a=self.W_a.copy(),
        )


class StateLayout:
    """Slices of the flat bundle for given plant/parameter/basis sizes."""

    def __init__(self, n: int, p: int, L: int, with_barrier: bool):
        self.n, self.p, self.L = int(n), int(p), int(L)
        self.with_barrier = bool(with_barrier)

        sizes = [
            ("x", self.n),
            ("bas", 2 if self.with_barrier else 0),
            ("theta_hat", self.p),
            ("Gamma", self.p * self.p),
            ("W_c", self.L),
            ("Upsilon", self.L * self.L),
            ("W_a", self.L),
        ]
        self.slices: dict[str, slice] = {}
        offset = 0
        for key, size in sizes:
            self.slices[key] = slice(offset, offset + size)
            offset += size
        self.size = offset

    def pack(self, state: LoopState) -> np.ndarray:
        y = np.empty(self.size)
        y[self.slices["x"]] = state.x
        if self.with_barrier:
            y[self.slices["bas"]] = (state.z, state.z_hat)
        y[self.slices["theta_hat"]] = state.theta_hat
        y[self.slices["Gamma"]] = np.asarray(state.Gamma).reshape(-1)
        y[self.slices["W_c"]] = state.W_c
        y[self.slices["Upsilon"]] = np.asarray(state.Upsilon).reshape(-1)
        y[self.slices["W_a"]] = state.W_a
        return y

    def unpack(self, y: np.ndarray) -> LoopState:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.size,):
            raise DimensionError(f"state bundle must have shape ({self.size},), got {y.shape}")
        if self.with_barrier:
            z, z_hat = (float(v) for v in y[self.slices["bas"]])
        else:
            z = z_hat = 0.0
        return LoopState(
            x=y[self.slices["x"]].copy(),
            z=z,
            z_hat=z_hat,
            theta_hat=y[self.slices["theta_hat"]].copy(),
            Gamma=y[self.slices["Gamma"]].reshape(self.p, self.p).copy(),
            W_c=y[self.slices["W_c"]].copy(),
            Upsilon=y[self.slices["Upsilon"]].reshape(self.L, self.L).copy(),
            W_a=y[self.slices["W_a"]].copy(),
        )

    def s(self, state: LoopState) -> np.ndarray:
        """Augmented (or plain) learning state s."""
        if self.with_barrier:
            return np.concatenate([state.x, [state.z]])
        return state.x.copy()
