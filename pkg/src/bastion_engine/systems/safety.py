"""
Constraint monitoring after each step.
"""

from typing import TYPE_CHECKING

from ..errors import SafetyViolationError

if TYPE_CHECKING:
    from ..simulation import Simulation


class SafetySystem:
    """Phase 7: Check h(x) at the new boundary."""

    def execute(self, sim: "Simulation") -> None:
        h = sim.h_now()
        t = sim.t
        if h < sim.min_h:
            sim.min_h = h
            sim.argmin_t = t

        if sim.problem.with_barrier:
            if not h > 0.0:
                sim.telemetry.log_safety_event(t, "violation", h)
                raise SafetyViolationError(t, h)
        elif h < 0.0 and (sim.h_prev is None or sim.h_prev >= 0.0):
            # Entering the unsafe set counts once per incursion
            sim.incursions += 1
            sim.telemetry.log_safety_event(t, "incursion", h)
        sim.h_prev = h
