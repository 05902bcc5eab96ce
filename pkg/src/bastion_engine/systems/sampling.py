"""
Window sampling and history-stack capture.
"""

from typing import TYPE_CHECKING

from ..estimator.history import capture_window, try_admit

if TYPE_CHECKING:
    from ..simulation import Simulation


class SamplingSystem:
    """Phase 1: Record (t, x, u) into the rolling window."""

    def execute(self, sim: "Simulation") -> None:
        sim.window.record(sim.t, sim.state.x, sim.terms.u)


class CaptureSystem:
    """Phase 2: Integrate the last window and offer it to the stack."""

    def execute(self, sim: "Simulation") -> None:
        # Only full windows, on the capture cadence
        if not sim.window.is_full or sim.step_index % sim.capture_every != 0:
            return

        entry = capture_window(sim.window, sim.problem.model, kappa=sim.problem.icl.kappa)
        decision = try_admit(sim.stack, entry)
        sim.telemetry.log_admission(decision)
        if decision.admitted and sim.learning_from is None:
            # Grid excitation is counted once the estimate has had a window to move
            sim.learning_from = sim.t + sim.problem.window
