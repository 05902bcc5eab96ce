"""
Small dense numerics shared by every engine module.

Vectors and matrices are plain ``numpy`` arrays; the helpers here add the
dimension checks, the symmetric Jacobi eigensolver used for excitation
metrics, window quadrature and the fixed-step RK4 integrator.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson, trapezoid

from ..errors import DimensionError, InsufficientDataError, IntegrationBlowupError

SYMMETRY_TOL = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
EPS = float(np.finfo(float).eps)
TINY_OFFDIAG = 1e-290
MAX_EIG_SIZE = 16


def as_vec(values, n: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D float array, optionally checking its length."""
    vec = np.atleast_1d(np.asarray(values, dtype=float))
    if vec.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {vec.shape}")
    if n is not None and vec.shape[0] != n:
        raise DimensionError(f"{name} must have length {n}, got {vec.shape[0]}")
    return vec


def as_mat(values, rows: int | None = None, cols: int | None = None,
           name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float array, optionally checking its shape."""
    mat = np.asarray(values, dtype=float)
    if mat.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {mat.shape}")
    if rows is not None and mat.shape[0] != rows:
        raise DimensionError(f"{name} must have {rows} rows, got {mat.shape[0]}")
    if cols is not None and mat.shape[1] != cols:
        raise DimensionError(f"{name} must have {cols} columns, got {mat.shape[1]}")
    return mat


def symmetrize(M: np.ndarray, tol: float | None = SYMMETRY_TOL) -> np.ndarray:
    """
    Return (M + M^T) / 2.

    With ``tol`` set, an asymmetry larger than ``tol * max(1, |M|)`` is
    treated as a caller error rather than round-off.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if tol is not None:
        scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
        if M.size and float(np.max(np.abs(M - M.T))) > tol * scale:
            raise DimensionError("matrix is not symmetric within tolerance")
    return 0.5 * (M + M.T)


def jacobi_eigh(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Sweeps over every (p, q) pair until the off-diagonal Frobenius norm drops
    below ``JACOBI_TOL * max(1, |M|_F)``.

    Returns:
        (eigenvalues ascending, eigenvectors as columns)
    """
    A = symmetrize(M).copy()
    n = A.shape[0]
    if n > MAX_EIG_SIZE:
        raise DimensionError(f"eigensolver limited to {MAX_EIG_SIZE}x{MAX_EIG_SIZE}, got {n}x{n}")
    V = np.eye(n)
    if n == 0:
        return np.zeros(0), V

    scale = max(1.0, float(np.linalg.norm(A)))
    tol = JACOBI_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(A[p, q])
                app, aqq = float(A[p, p]), float(A[q, q])
                if abs(apq) < EPS * math.sqrt(abs(app * aqq)) or abs(apq) < TINY_OFFDIAG * scale:
                    # Below round-off of the diagonal: drop instead of rotating
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c

                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0

                vec_p = V[:, p].copy()
                vec_q = V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q

    eigvals = np.diag(A).copy()
    order = np.argsort(eigvals, kind="stable")
    return eigvals[order], V[:, order]


def sym_min_eig(M: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix (Jacobi)."""
    eigvals, _ = jacobi_eigh(M)
    if eigvals.size == 0:
        raise DimensionError("cannot take the eigenvalue of an empty matrix")
    return float(eigvals[0])


def sym_max_eig(M: np.ndarray) -> float:
    """Largest eigenvalue of a symmetric matrix (Jacobi)."""
    eigvals, _ = jacobi_eigh(M)
    if eigvals.size == 0:
        raise DimensionError("cannot take the eigenvalue of an empty matrix")
    return float(eigvals[-1])


def trapezoid_accumulate(times: Sequence[float], values) -> np.ndarray:
    """
    Trapezoidal integral of sampled vectors or matrices over the window span.

    Args:
        times: Strictly increasing sample times, length k >= 2
        values: Array-like of shape (k, ...) holding one sample per time

    Returns:
        Integral with the per-sample shape
    """
    t, v = _check_samples(times, values)
    return np.asarray(trapezoid(v, x=t, axis=0), dtype=float)


def simpson_accumulate(times: Sequence[float], values) -> np.ndarray:
    """
    Composite Simpson integral of sampled vectors or matrices.

    Fourth order in the sample spacing, matching RK4 state samples. Falls
    back to the trapezoid rule for two samples.
    """
    t, v = _check_samples(times, values)
    if t.shape[0] == 2:
        return np.asarray(trapezoid(v, x=t, axis=0), dtype=float)
    return np.asarray(simpson(v, x=t, axis=0), dtype=float)


def _check_samples(times, values) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape[0] < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {t.size}")
    if v.shape[0] != t.shape[0]:
        raise DimensionError(f"got {t.shape[0]} times but {v.shape[0]} samples")
    if np.any(np.diff(t) <= 0.0):
        raise InsufficientDataError("sample times must be strictly increasing")
    return t, v


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float,
             y: np.ndarray, dt: float) -> np.ndarray:
    """Classical fourth-order Runge-Kutta advance of ``y`` by ``dt``."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")

    def stage(index: int, tau: float, state: np.ndarray) -> np.ndarray:
        k = np.asarray(f(tau, state), dtype=float)
        if not np.all(np.isfinite(k)):
            raise IntegrationBlowupError(tau, index)
        return k

    k1 = stage(1, t, y)
    k2 = stage(2, t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = stage(3, t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = stage(4, t + dt, y + dt * k3)
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y_next)):
        raise IntegrationBlowupError(t + dt, 5)
    return y_next
