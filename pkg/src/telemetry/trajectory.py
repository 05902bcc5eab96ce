"""
In-memory trajectory log.

One row per logged step; the column set is derived from the plant,
parameter, basis and input sizes so the header is fixed per scenario.
"""

from __future__ import annotations

from typing import Optional

import numpy as np


def trajectory_header(n: int, p: int, L: int, m: int) -> list[str]:
    """t, x1..xn, z, zhat, th1..thp, theta_err, wc1..wcL, wa1..waL, u.., delta, h, sigmin_stack, sigmin_grid, J"""
    inputs = ["u"] if m == 1 else [f"u{i + 1}" for i in range(m)]
    return (
        ["t"]
        + [f"x{i + 1}" for i in range(n)]
        + ["z", "zhat"]
        + [f"th{i + 1}" for i in range(p)]
        + ["theta_err"]
        + [f"wc{i + 1}" for i in range(L)]
        + [f"wa{i + 1}" for i in range(L)]
        + inputs
        + ["delta", "h", "sigmin_stack", "sigmin_grid", "J"]
    )


class TrajectoryLog:
    """
    Time-indexed record of states, estimates, weights, control and monitors.

    ``cost`` holds the instantaneous running cost s^T Q s + u^T R u of each
    row and ``dt_row`` the time each row stands for; neither is a CSV column.
    """

    def __init__(self, n: int, p: int, L: int, m: int, dt_row: float):
        self.n, self.p, self.L, self.m = n, p, L, m
        self.dt_row = float(dt_row)
        self.header = trajectory_header(n, p, L, m)
        self.index = {name: i for i, name in enumerate(self.header)}
        self._rows: list[np.ndarray] = []
        self._cost: list[float] = []
        self._array: Optional[np.ndarray] = None

    def append(self, t: float, x, z: float, z_hat: float, theta_hat, theta_err: float,
               W_c, W_a, u, delta: float, h: float, sigmin_stack: float,
               sigmin_grid: float, J: float, cost: float) -> None:
        if self._rows and not t > self._rows[-1][0]:
            raise ValueError(f"log times must increase strictly, got {t} after {self._rows[-1][0]}")
        row = np.concatenate([
            [t], np.asarray(x, dtype=float), [z, z_hat],
            np.asarray(theta_hat, dtype=float), [theta_err],
            np.asarray(W_c, dtype=float), np.asarray(W_a, dtype=float),
            np.atleast_1d(np.asarray(u, dtype=float)),
            [delta, h, sigmin_stack, sigmin_grid, J],
        ])
        self._rows.append(row)
        self._cost.append(float(cost))
        self._array = None

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> np.ndarray:
        if self._array is None:
            self._array = np.array(self._rows) if self._rows else np.zeros((0, len(self.header)))
        return self._array

    @property
    def cost(self) -> np.ndarray:
        return np.asarray(self._cost, dtype=float)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.index[name]]

    def columns(self, prefix: str, count: int) -> np.ndarray:
        """Block of numbered columns, e.g. ("x", 2) -> x1, x2."""
        start = self.index[f"{prefix}1"]
        return self.rows[:, start:start + count]

    @property
    def t(self) -> np.ndarray:
        return self.column("t")
