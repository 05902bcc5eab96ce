"""
Control-affine plants with linearly parameterized uncertainty.

    x_dot = Y(x) theta + f(x) + g(x) u

Every map accepts a single state of shape (n,) or a batch of shape (..., n)
and returns the matching batched result, so the extrapolation grid can be
evaluated in one call.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..core.numerics import as_vec
from ..errors import DimensionError
from ..registry import register_component


class PlantModel(ABC):
    """
    Known structure (Y, f, g) plus the true parameters of the simulated plant.

    Subclasses set ``n`` (state), ``m`` (input) and ``p`` (parameter) sizes
    and implement the three structural maps. ``theta_true`` is only read by
    the plant integrator and by test oracles; learners never see it.
    """

    name: str = "plant"
    n: int
    m: int
    p: int

    def __init__(self, theta_true, theta_bound: float):
        self.theta_true = as_vec(theta_true, self.p, name="theta_true")
        self.theta_bound = float(theta_bound)
        self.theta_true.setflags(write=False)
        self._check_assumptions()

    def _check_assumptions(self) -> None:
        if self.theta_bound <= 0:
            raise ValueError(f"theta_bound must be positive, got {self.theta_bound}")
        if np.linalg.norm(self.theta_true) > self.theta_bound:
            raise ValueError(
                f"|theta_true|={np.linalg.norm(self.theta_true):.6g} exceeds theta_bound={self.theta_bound}"
            )
        origin = np.zeros(self.n)
        if np.any(self.drift(origin) != 0.0) or np.any(self.regressor(origin) != 0.0):
            raise ValueError(f"{self.name}: f(0) and Y(0) must vanish")
        if not np.linalg.norm(self.input_matrix(origin)) > 0.0:
            raise ValueError(f"{self.name}: g(0) must be non-zero")

    @abstractmethod
    def regressor(self, x: np.ndarray) -> np.ndarray:
        """Y(x), shape (..., n, p)."""

    @abstractmethod
    def drift(self, x: np.ndarray) -> np.ndarray:
        """f(x), shape (..., n)."""

    @abstractmethod
    def input_matrix(self, x: np.ndarray) -> np.ndarray:
        """g(x), shape (..., n, m)."""

    def check_state(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.n,):
            raise DimensionError(f"{self.name}: state must end in dimension {self.n}, got {x.shape}")
        return x

    def check_input(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape[-1:] != (self.m,):
            raise DimensionError(f"{self.name}: input must end in dimension {self.m}, got {u.shape}")
        return u


@register_component("plant", "case-study-2d", properties=["case-study", "nonlinear"])
class CaseStudyPlant(PlantModel):
    """Planar obstacle-avoidance plant with four unknown parameters.

    Y(x) = [[x1, x2, 0, 0], [0, 0, x1 + x2, x1^2 x2]], f = 0,
    g(x) = [0, cos(2 x1) + 2]^T.
    """

    name = "case-study-2d"
    n = 2
    m = 1
    p = 4

    def __init__(self, theta_true=(-1.0, -1.0, -0.5, -0.5), theta_bound: float = 2.0):
        super().__init__(theta_true, theta_bound)

    def regressor(self, x):
        x = self.check_state(x)
        x1, x2 = x[..., 0], x[..., 1]
        zeros = np.zeros_like(x1)
        top = np.stack([x1, x2, zeros, zeros], axis=-1)
        bottom = np.stack([zeros, zeros, x1 + x2, x1 * x1 * x2], axis=-1)
        return np.stack([top, bottom], axis=-2)

    def drift(self, x):
        return np.zeros_like(self.check_state(x))

    def input_matrix(self, x):
        x = self.check_state(x)
        x1 = x[..., 0]
        return np.stack([np.zeros_like(x1), np.cos(2.0 * x1) + 2.0], axis=-1)[..., None]


@register_component("plant", "scalar-linear", properties=["linear", "oracle"])
class ScalarLinearPlant(PlantModel):
    """Scalar linear plant x_dot = a x + b u with a unknown (theta = a)."""

    name = "scalar-linear"
    n = 1
    m = 1
    p = 1

    def __init__(self, a: float = -1.0, b: float = 1.0, theta_bound: float = 2.0):
        if b == 0:
            raise ValueError("scalar-linear plant requires b != 0")
        self.b = float(b)
        super().__init__([a], theta_bound)

    @property
    def a(self) -> float:
        return float(self.theta_true[0])

    def regressor(self, x):
        x = self.check_state(x)
        return x[..., None]

    def drift(self, x):
        return np.zeros_like(self.check_state(x))

    def input_matrix(self, x):
        x = self.check_state(x)
        return np.full(x.shape + (1,), self.b)
