"""
RK4 advance and the post-step projection clamp.
"""

from typing import TYPE_CHECKING

import numpy as np

from ..core.numerics import rk4_step, symmetrize
from ..errors import BarrierDomainError, SafetyViolationError, UnsafeStateError

if TYPE_CHECKING:
    from ..simulation import Simulation


class IntegrationSystem:
    """Phase 5: Advance the bundle by dt with the stack and clamp frozen."""

    def execute(self, sim: "Simulation") -> None:
        from ..simulation import closed_loop_deriv

        ctx = sim.ctx
        t = sim.t
        try:
            y_next = rk4_step(lambda tau, y: closed_loop_deriv(tau, y, ctx), t, sim.y, sim.problem.dt)
        except (BarrierDomainError, UnsafeStateError):
            raise SafetyViolationError(t, sim.h_now())

        # Running cost, rectangle rule at the left boundary
        sim.J += sim.problem.dt * sim.terms.cost
        sim.y = y_next
        sim.step_index += 1


class ProjectionSystem:
    """Phase 6: Keep theta_hat inside the ball and the gain matrices symmetric."""

    def execute(self, sim: "Simulation") -> None:
        sl = sim.layout.slices
        y = sim.y
        bound = sim.problem.icl.theta_bound

        theta = y[sl["theta_hat"]]
        norm = float(np.linalg.norm(theta))
        if norm > bound:
            theta = theta * (bound / norm)
            if float(np.linalg.norm(theta)) > bound:
                theta = theta * (1.0 - 4.0 * np.finfo(float).eps)
            y[sl["theta_hat"]] = theta
            sim.projection_clamps += 1

        p, L = sim.layout.p, sim.layout.L
        y[sl["Gamma"]] = symmetrize(y[sl["Gamma"]].reshape(p, p), tol=None).reshape(-1)
        y[sl["Upsilon"]] = symmetrize(y[sl["Upsilon"]].reshape(L, L), tol=None).reshape(-1)
