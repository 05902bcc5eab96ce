"""
Exception types raised by the engine.

Each error subclasses the built-in that plain validation code would raise,
so callers that only care about ``ValueError``/``RuntimeError`` keep working.
"""

from __future__ import annotations
from typing import Optional


class DimensionError(ValueError):
    """Shape or dimension mismatch."""


class InsufficientDataError(ValueError):
    """Not enough (or badly ordered) samples for a quadrature or window."""


class UnsafeStateError(ValueError):
    """State outside the strict interior of the safe set."""

    def __init__(self, h: float, message: Optional[str] = None):
        self.h = float(h)
        super().__init__(message or f"state is not strictly safe: h(x)={self.h:.6g}")


class BarrierDomainError(ValueError):
    """Barrier argument left the representable cone (z + beta0 <= 0)."""

    def __init__(self, value: float, message: Optional[str] = None):
        self.value = float(value)
        super().__init__(message or f"barrier argument must be positive, got {self.value:.6g}")


class DegenerateGainError(ValueError):
    """Projection boundary branch with mu^T Gamma mu = 0."""


class IntegrationBlowupError(RuntimeError):
    """Non-finite value produced during a Runge-Kutta stage."""

    def __init__(self, t: float, stage: int):
        self.t = float(t)
        self.stage = int(stage)
        super().__init__(f"integration blew up at t={self.t:.6g} (stage {self.stage})")


class SafetyViolationError(RuntimeError):
    """Closed-loop trajectory left the safe set in barrier-state mode."""

    def __init__(self, t: float, h: float):
        self.t = float(t)
        self.h = float(h)
        super().__init__(f"safety violation at t={self.t:.6g}: h(x)={self.h:.6g}")
