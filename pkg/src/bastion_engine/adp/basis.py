"""
Value-function bases.

A basis maps the learning state s (batched, shape (..., d)) to features
sigma(s) of shape (..., L) and their Jacobian of shape (..., L, d).
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..errors import DimensionError
from ..registry import register_component


class Basis(ABC):
    name: str = "basis"
    L: int
    dim: int

    def check(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if s.shape[-1:] != (self.dim,):
            raise DimensionError(f"{self.name} expects states of dimension {self.dim}, got {s.shape}")
        return s

    @abstractmethod
    def sigma(self, s) -> np.ndarray:
        ...

    @abstractmethod
    def grad(self, s) -> np.ndarray:
        ...


class QuadraticBasis(Basis):
    """Monomials s_i s_j for a fixed list of index pairs."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __init__(self):
        self.L = len(self.pairs)
        self._i = np.array([i for i, _ in self.pairs])
        self._j = np.array([j for _, j in self.pairs])
        # d(s_i s_j)/ds = s_j e_i + s_i e_j
        self._Ei = np.eye(self.dim)[self._i]
        self._Ej = np.eye(self.dim)[self._j]

    def sigma(self, s):
        s = self.check(s)
        return s[..., self._i] * s[..., self._j]

    def grad(self, s):
        s = self.check(s)
        return s[..., self._j, None] * self._Ei + s[..., self._i, None] * self._Ej


@register_component("basis", "quadratic-6", properties=["case-study", "augmented"])
class QuadraticSix(QuadraticBasis):
    """[s1^2, s2^2, s3^2, s1 s2, s2 s3, s3 s1] on s = (x1, x2, z)."""
    name = "quadratic-6"
    dim = 3
    pairs = ((0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0))


@register_component("basis", "quadratic-3", properties=["planar"])
class QuadraticThree(QuadraticBasis):
    """[s1^2, s2^2, s1 s2] on s = (x1, x2)."""
    name = "quadratic-3"
    dim = 2
    pairs = ((0, 0), (1, 1), (0, 1))


@register_component("basis", "quadratic-1", properties=["scalar", "oracle"])
class QuadraticOne(QuadraticBasis):
    """[s^2] on a scalar state."""
    name = "quadratic-1"
    dim = 1
    pairs = ((0, 0),)
