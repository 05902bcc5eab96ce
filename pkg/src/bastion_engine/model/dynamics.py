"""
Plant and safety-embedded (augmented) dynamics.

Both dynamics classes expose the same batched interface,
``maps(s) -> (A, F, G)`` with ``s_dot = A theta + F + G u``, so the
estimator and the actor-critic learners never branch on the run mode.
"""

from __future__ import annotations

import numpy as np

from ..core.numerics import as_vec
from ..errors import BarrierDomainError
from .barrier import AugState, BarrierSpec
from .plant import PlantModel


def plant_deriv(model: PlantModel, x, u) -> np.ndarray:
    """x_dot = Y(x) theta + f(x) + g(x) u with the true parameters."""
    x = model.check_state(x)
    u = model.check_input(u)
    return (
        np.einsum("...ij,j->...i", model.regressor(x), model.theta_true)
        + model.drift(x)
        + np.einsum("...ij,...j->...i", model.input_matrix(x), u)
    )


class PlantDynamics:
    """Unaugmented dynamics, s = x. Used when safety is switched off."""

    has_barrier = False

    def __init__(self, model: PlantModel):
        self.model = model
        self.state_dim = model.n

    def maps(self, s):
        x = self.model.check_state(s)
        return self.model.regressor(x), self.model.drift(x), self.model.input_matrix(x)

    def split(self, s) -> tuple[np.ndarray, float]:
        return np.asarray(s, dtype=float), 0.0


class SafetyEmbeddedDynamics:
    """
    Plant plus barrier state, s = (x, z).

    The extra row is Phi(z + beta0) grad(h)(x) applied to each of Y, f and g.
    """

    has_barrier = True

    def __init__(self, model: PlantModel, spec: BarrierSpec):
        if spec.n != model.n:
            raise ValueError(f"barrier dimension {spec.n} does not match plant dimension {model.n}")
        self.model = model
        self.spec = spec
        self.state_dim = model.n + 1

    def barrier_gain(self, z) -> np.ndarray:
        arg = np.asarray(z, dtype=float) + self.spec.beta0
        if np.any(~(arg > 0)):
            raise BarrierDomainError(float(np.min(arg)))
        return self.spec.phi(arg)

    def maps(self, s):
        s = np.asarray(s, dtype=float)
        if s.shape[-1] != self.state_dim:
            raise ValueError(f"augmented state must end in dimension {self.state_dim}, got {s.shape}")
        x, z = s[..., :-1], s[..., -1]
        phi = self.barrier_gain(z)
        grad_h = self.spec.grad_h(x)

        Y = self.model.regressor(x)
        f = self.model.drift(x)
        g = self.model.input_matrix(x)

        A_row = phi[..., None] * np.einsum("...i,...ij->...j", grad_h, Y)
        F_row = phi * np.einsum("...i,...i->...", grad_h, f)
        G_row = phi[..., None] * np.einsum("...i,...ij->...j", grad_h, g)

        A = np.concatenate([Y, A_row[..., None, :]], axis=-2)
        F = np.concatenate([f, F_row[..., None]], axis=-1)
        G = np.concatenate([g, G_row[..., None, :]], axis=-2)
        return A, F, G

    def split(self, s) -> tuple[np.ndarray, float]:
        s = np.asarray(s, dtype=float)
        return s[:-1], float(s[-1])


def aug_maps(model: PlantModel, spec: BarrierSpec, s: AugState):
    """(A, F, G) of the augmented system at a single state."""
    x = as_vec(s.x, model.n, name="s.x")
    return SafetyEmbeddedDynamics(model, spec).maps(np.concatenate([x, [float(s.z)]]))


def make_dynamics(model: PlantModel, spec: BarrierSpec | None = None):
    """Safety-embedded dynamics when a barrier is given, plain plant otherwise."""
    if spec is None:
        return PlantDynamics(model)
    return SafetyEmbeddedDynamics(model, spec)
