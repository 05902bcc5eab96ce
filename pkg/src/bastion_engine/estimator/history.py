"""
History stack for integral concurrent learning.

Each entry integrates the plant over a window [t - T, t]:

    X = x(t) - x(t - T)
    Y = integral of Y(x)
    Gfu = integral of f(x) + g(x) u

so that X = Y theta + Gfu up to quadrature error. The integrals use
Simpson's rule over the per-step samples, which keeps that error at the
order of the RK4 state. The stack keeps at most N
entries and only swaps one in when doing so raises the minimum eigenvalue of
Sigma_Y = sum_i sigma_i Y_i^T Y_i by a relative margin delta.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..core.numerics import as_vec, simpson_accumulate, sym_min_eig, symmetrize
from ..errors import InsufficientDataError
from ..model.plant import PlantModel


@dataclass(frozen=True)
class HistoryEntry:
    """One integrated window."""
    X: np.ndarray
    Y: np.ndarray
    Gfu: np.ndarray
    sigma: float
    t: float

    def residual(self, theta: np.ndarray) -> float:
        """|X - Y theta - Gfu|; zero for exact integrals at the true theta."""
        return float(np.linalg.norm(self.X - self.Y @ theta - self.Gfu))

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "sigma": self.sigma,
            "X": self.X.tolist(),
            "Y": self.Y.tolist(),
            "Gfu": self.Gfu.tolist(),
        }


class WindowBuffer:
    """
    Rolling (t, x, u) samples covering the last T seconds at step dt.

    Holds ``round(T / dt) + 1`` samples once warm, so the span is T up to
    the rounding of T to a whole number of steps.
    """

    def __init__(self, window: float, dt: float):
        if not window > 0:
            raise ValueError(f"window T must be positive, got {window}")
        self.steps = max(1, int(round(window / dt)))
        self.samples: deque[tuple[float, np.ndarray, np.ndarray]] = deque(maxlen=self.steps + 1)

    def record(self, t: float, x, u) -> None:
        self.samples.append((float(t), np.array(x, dtype=float), np.array(u, dtype=float)))

    @property
    def is_full(self) -> bool:
        return len(self.samples) == self.samples.maxlen

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)


def capture_window(buffer: Iterable[tuple[float, np.ndarray, np.ndarray]],
                   model: PlantModel, kappa: float = 1.0) -> HistoryEntry:
    """
    Build a HistoryEntry from sampled (t, x, u) over one window.

    Raises:
        InsufficientDataError: fewer than 2 samples or non-increasing times
    """
    samples = list(buffer)
    if len(samples) < 2:
        raise InsufficientDataError(f"window needs at least 2 samples, got {len(samples)}")

    times = np.array([s[0] for s in samples])
    xs = model.check_state(np.array([s[1] for s in samples]))
    us = model.check_input(np.array([s[2] for s in samples]))

    Y_int = simpson_accumulate(times, model.regressor(xs))
    fg = model.drift(xs) + np.einsum("kij,kj->ki", model.input_matrix(xs), us)
    Gfu = simpson_accumulate(times, fg)
    X = xs[-1] - xs[0]

    sigma = 1.0 / (1.0 + float(kappa) * float(np.sum(Y_int * Y_int)))
    return HistoryEntry(X=X, Y=Y_int, Gfu=Gfu, sigma=sigma, t=float(times[-1]))


@dataclass
class AdmissionDecision:
    """Outcome of one try_admit call."""
    admitted: bool
    slot: Optional[int]
    min_eig_before: float
    min_eig_after: float
    t: float
    filling: bool = False


class HistoryStack:
    """
    Fixed-capacity store of integrated windows.

    ``Sigma_Y`` and ``b_Y = sum_i sigma_i Y_i^T (X_i - Gfu_i)`` are cached so
    the ICL sum term at any theta_hat is ``b_Y - Sigma_Y theta_hat``.
    """

    def __init__(self, capacity: int, p: int, delta: float = 0.05, kappa: float = 1.0):
        if capacity < 1:
            raise ValueError(f"stack capacity must be at least 1, got {capacity}")
        if not delta > 0:
            raise ValueError(f"admission margin delta must be positive, got {delta}")
        if kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {kappa}")
        self.capacity = int(capacity)
        self.p = int(p)
        self.delta = float(delta)
        self.kappa = float(kappa)
        self.entries: list[HistoryEntry] = []
        self.Sigma_Y = np.zeros((self.p, self.p))
        self.b_Y = np.zeros(self.p)
        self.min_eig = 0.0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_full(self) -> bool:
        return len(self.entries) >= self.capacity

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @staticmethod
    def _gram(entry: HistoryEntry) -> np.ndarray:
        return entry.sigma * (entry.Y.T @ entry.Y)

    def recompute(self) -> tuple[np.ndarray, np.ndarray]:
        """Sigma_Y and b_Y rebuilt from the entries."""
        Sigma = np.zeros((self.p, self.p))
        b = np.zeros(self.p)
        for entry in self.entries:
            Sigma += self._gram(entry)
            b += entry.sigma * (entry.Y.T @ (entry.X - entry.Gfu))
        return symmetrize(Sigma, tol=None), b

    def _refresh(self) -> None:
        self.Sigma_Y, self.b_Y = self.recompute()
        self.min_eig = sym_min_eig(self.Sigma_Y)

    def icl_sum(self, theta_hat) -> np.ndarray:
        """sum_i sigma_i Y_i^T (X_i - Gfu_i - Y_i theta_hat)."""
        return self.b_Y - self.Sigma_Y @ as_vec(theta_hat, self.p, name="theta_hat")

    def snapshot(self) -> dict:
        return {
            "capacity": self.capacity,
            "size": len(self.entries),
            "min_eig": self.min_eig,
            "entries": [entry.to_dict() for entry in self.entries],
        }


def try_admit(stack: HistoryStack, candidate: HistoryEntry) -> AdmissionDecision:
    """
    Offer a candidate to the stack; the stack is updated in place on admission.

    While filling, every candidate is appended. Once full, each slot is
    tentatively replaced and the replacement with the largest minimum
    eigenvalue wins if it beats the current value by the factor (1 + delta).
    """
    before = stack.min_eig

    if not stack.is_full:
        stack.entries.append(candidate)
        stack._refresh()
        return AdmissionDecision(
            admitted=True, slot=len(stack.entries) - 1,
            min_eig_before=before, min_eig_after=stack.min_eig,
            t=candidate.t, filling=True,
        )

    new_gram = HistoryStack._gram(candidate)
    eig_mins = np.zeros(stack.capacity)
    for j, entry in enumerate(stack.entries):
        trial = stack.Sigma_Y - HistoryStack._gram(entry) + new_gram
        eig_mins[j] = sym_min_eig(symmetrize(trial, tol=None))

    hotseat = int(np.argmax(eig_mins))
    best = float(eig_mins[hotseat])
    if before < best / (1.0 + stack.delta) and best > before:
        stack.entries[hotseat] = candidate
        stack._refresh()
        return AdmissionDecision(
            admitted=True, slot=hotseat,
            min_eig_before=before, min_eig_after=stack.min_eig, t=candidate.t,
        )

    return AdmissionDecision(
        admitted=False, slot=None,
        min_eig_before=before, min_eig_after=before, t=candidate.t,
    )
