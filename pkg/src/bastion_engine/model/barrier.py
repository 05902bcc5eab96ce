"""
Safe-set constraints, barrier operators and the barrier state.

The safe set is S = {x : h(x) >= 0}. A barrier operator B maps h(x) > 0 to
beta(x) = B(h(x)), which diverges at the boundary of S. The barrier state is
z = beta(x) - beta0 with beta0 = beta(0).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..core.numerics import as_vec
from ..errors import BarrierDomainError, UnsafeStateError
from ..registry import register_component


class Constraint(ABC):
    """Scalar constraint h with an analytic gradient; batched over (..., n)."""

    name: str = "constraint"

    @abstractmethod
    def h(self, x: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def grad(self, x: np.ndarray) -> np.ndarray:
        """Row gradient of h, shape (..., n)."""


@register_component("constraint", "circle", properties=["obstacle"])
class CircularObstacle(Constraint):
    """Keep-out disk: h(x) = |x - c|^2 - r^2."""

    name = "circle"

    def __init__(self, center=(1.0, 2.0), radius: float = 0.5):
        self.center = as_vec(center, name="constraint.center")
        self.center.setflags(write=False)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError(f"constraint.radius must be positive, got {self.radius}")

    def h(self, x):
        d = np.asarray(x, dtype=float) - self.center
        return np.sum(d * d, axis=-1) - self.radius ** 2

    def grad(self, x):
        return 2.0 * (np.asarray(x, dtype=float) - self.center)


class BarrierOperator(ABC):
    """
    Smooth decreasing map B on (0, inf) with B(a) -> inf as a -> 0+.

    ``gain`` is Phi = (dB/dh) composed with B^-1, the factor that multiplies
    grad(h) x_dot in the barrier-state dynamics.
    """

    name: str = "barrier"

    @abstractmethod
    def value(self, a):
        ...

    @abstractmethod
    def inverse(self, beta):
        ...

    @abstractmethod
    def gain(self, beta):
        ...


@register_component("barrier", "inverse", properties=["default"])
class InverseBarrier(BarrierOperator):
    """B(a) = K / a, with Phi(beta) = -beta^2 / K."""

    name = "inverse"

    def __init__(self, K: float = 0.01):
        self.K = float(K)
        if not self.K > 0:
            raise ValueError(f"barrier.K must be positive, got {self.K}")

    def value(self, a):
        return self.K / a

    def inverse(self, beta):
        return self.K / beta

    def gain(self, beta):
        # dB/da = -K/a^2 at a = K/beta
        return -(beta * beta) / self.K


class BarrierSpec:
    """
    Constraint plus barrier operator, with beta0 fixed at the origin.

    The origin must lie strictly inside the safe set, otherwise beta0 does
    not exist and construction fails.
    """

    def __init__(self, constraint: Constraint, operator: BarrierOperator, n: int):
        self.constraint = constraint
        self.operator = operator
        self.n = int(n)
        h0 = float(constraint.h(np.zeros(self.n)))
        if not h0 > 0:
            raise UnsafeStateError(h0, f"origin must be strictly safe to define beta0, h(0)={h0:.6g}")
        self.beta0 = float(operator.value(h0))

    @property
    def K(self) -> float:
        return getattr(self.operator, "K", float("nan"))

    def h(self, x):
        return self.constraint.h(x)

    def grad_h(self, x):
        return self.constraint.grad(x)

    def beta(self, x) -> np.ndarray:
        """Batched beta(x); raises UnsafeStateError if any h(x) <= 0."""
        hx = np.asarray(self.constraint.h(x), dtype=float)
        if np.any(~(hx > 0)):
            raise UnsafeStateError(float(np.min(hx)))
        return self.operator.value(hx)

    def phi(self, beta) -> np.ndarray:
        """Batched Phi(beta); raises BarrierDomainError if any beta <= 0."""
        beta = np.asarray(beta, dtype=float)
        if np.any(~(beta > 0)):
            raise BarrierDomainError(float(np.min(beta)))
        return self.operator.gain(beta)


@dataclass(frozen=True)
class AugState:
    """Plant state plus barrier state, s = (x, z)."""
    x: np.ndarray
    z: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.x, dtype=float), [float(self.z)]])

    @classmethod
    def from_array(cls, s) -> "AugState":
        s = as_vec(s, name="s")
        return cls(x=s[:-1].copy(), z=float(s[-1]))


def eval_beta(spec: BarrierSpec, x) -> float:
    """beta(x) = B(h(x)) at a single state."""
    return float(spec.beta(as_vec(x, spec.n, name="x")))


def eval_phi(spec: BarrierSpec, beta: float) -> float:
    """Phi(beta) for a single barrier value."""
    return float(spec.phi(float(beta)))


def augment(spec: BarrierSpec, x) -> AugState:
    """Lift x onto the cone: z = beta(x) - beta0."""
    x = as_vec(x, spec.n, name="x")
    return AugState(x=x.copy(), z=eval_beta(spec, x) - spec.beta0)


def is_safe(spec: BarrierSpec, x) -> tuple[bool, float]:
    """(h(x) >= 0, h(x))."""
    margin = float(spec.h(as_vec(x, spec.n, name="x")))
    return margin >= 0.0, margin
