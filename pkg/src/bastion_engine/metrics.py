"""
Run metrics computed from a trajectory log.
"""

from __future__ import annotations

import math
from typing import Any, Optional

import numpy as np

from telemetry.trajectory import TrajectoryLog

TAIL_FRACTION = 0.1


def compute_metrics(log: TrajectoryLog, chi: Optional[float] = None) -> dict[str, Any]:
    """
    Summary record of a (possibly partial) trajectory log.

    J_total is the rectangle rule over log rows, sum of dt_row * cost. The
    ultimate bound is the sup of ||(x, z - z_hat, theta_err)|| over the last
    10% of rows.

    Raises:
        ValueError: If the log has no rows
    """
    if len(log) == 0:
        raise ValueError("cannot compute metrics of an empty log")

    t = log.t
    h = log.column("h")
    theta_err = log.column("theta_err")
    x = log.columns("x", log.n)
    z_err = log.column("z") - log.column("zhat")

    k = int(np.argmin(h))
    J_total = float(np.sum(log.cost) * log.dt_row)

    rows = len(log)
    tail = max(1, math.ceil(TAIL_FRACTION * rows))
    norms = np.sqrt(np.sum(x[-tail:] ** 2, axis=1) + z_err[-tail:] ** 2 + theta_err[-tail:] ** 2)
    ultimate_bound = float(np.max(norms))

    unsafe = h < 0.0
    entries = int(unsafe[0]) + int(np.sum(unsafe[1:] & ~unsafe[:-1]))

    sigmin_grid = log.column("sigmin_grid")
    metrics = {
        "rows": rows,
        "t_final": float(t[-1]),
        "min_h": float(h[k]),
        "argmin_t": float(t[k]),
        "theta_err_final": float(theta_err[-1]),
        "J_total": J_total,
        "ultimate_bound": ultimate_bound,
        "sigmin_grid_inf": float(np.min(sigmin_grid)),
        "sigmin_stack_final": float(log.column("sigmin_stack")[-1]),
        "unsafe_row_entries": entries,
        "all_finite": bool(np.all(np.isfinite(log.rows))),
    }
    if chi is not None:
        metrics["chi"] = float(chi)
        metrics["ultimately_bounded"] = bool(metrics["all_finite"] and ultimate_bound < chi)
    return metrics
