"""
Per-step monitors: Upsilon clamp, excitation, gain bounds and the
gain-condition diagnostic.
"""

from typing import TYPE_CHECKING

import numpy as np

from ..adp.update_laws import upsilon_clamp
from ..core.numerics import sym_max_eig, sym_min_eig
from ..estimator.icl import check_gain_condition

if TYPE_CHECKING:
    from ..simulation import Simulation


class MonitorSystem:
    """Phase 3: Decide the Upsilon clamp and update run-level monitors."""

    def execute(self, sim: "Simulation") -> None:
        pb = sim.problem
        st = sim.state

        clamp = upsilon_clamp(st.Upsilon, pb.adp)
        sim.ctx.clamp = clamp
        if clamp.suspend_growth:
            sim.growth_suspended_steps += 1
        if clamp.suspend_shrink:
            sim.shrink_suspended_steps += 1

        if not pb.grid.omega_contains(sim.terms.s):
            sim.outside_omega_steps += 1

        if sim.step_index % pb.log_every == 0:
            self._log_step_monitors(sim, st)

        every = sim.telemetry.config.diagnostic_every
        if every and sim.step_index % every == 0:
            self.check_gains(sim)

    def _log_step_monitors(self, sim: "Simulation", st) -> None:
        pb = sim.problem
        terms = sim.terms

        gamma_lo = sym_min_eig(st.Gamma)
        sim.gamma_min = min(sim.gamma_min, gamma_lo)
        sim.gamma_max = max(sim.gamma_max, sym_max_eig(st.Gamma))
        if not gamma_lo > 0.0:
            sim.telemetry.log_safety_event(sim.t, "gamma_not_positive_definite", None)

        ext = terms.extrapolated
        sim.sigmin_grid = sym_min_eig(ext.excitation())
        sim.sigmin_grid_inf = min(sim.sigmin_grid_inf, sim.sigmin_grid)
        if sim.learning_from is not None and sim.t >= sim.learning_from - 1e-12:
            sim.sigmin_grid_inf_learning = min(sim.sigmin_grid_inf_learning, sim.sigmin_grid)

        on_traj = float(np.linalg.norm(terms.omega)) / terms.rho
        on_grid = float(np.max(np.linalg.norm(ext.omegas, axis=1) / ext.rhos))
        sim.normalized_regressor_max = max(sim.normalized_regressor_max, on_traj, on_grid)

        if pb.with_barrier:
            on_cone = float(pb.spec.beta(st.x)) - pb.spec.beta0
            sim.cone_error_max = max(sim.cone_error_max, abs(st.z - on_cone))

    def check_gains(self, sim: "Simulation") -> None:
        report = check_gain_condition(sim.problem.icl, sim.gamma_max, sim.stack)
        sim.gain_report = report
        sim.telemetry.log_diagnostic(sim.t, "gain_condition", report.to_dict())
