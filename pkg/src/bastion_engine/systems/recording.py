"""
Trajectory logging system.
"""

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from ..simulation import Simulation


class LoggingSystem:
    """Phase 4: Append one trajectory row every ``log_every`` steps."""

    def execute(self, sim: "Simulation") -> None:
        if sim.step_index % sim.problem.log_every != 0:
            return

        st = sim.state
        terms = sim.terms
        theta_err = float(np.linalg.norm(st.theta_hat - sim.problem.model.theta_true))
        sim.log.append(
            t=sim.t,
            x=st.x,
            z=st.z,
            z_hat=st.z_hat,
            theta_hat=st.theta_hat,
            theta_err=theta_err,
            W_c=st.W_c,
            W_a=st.W_a,
            u=terms.u,
            delta=terms.delta,
            h=sim.h_now(),
            sigmin_stack=sim.stack.min_eig,
            sigmin_grid=sim.sigmin_grid,
            J=sim.J,
            cost=terms.cost,
        )
