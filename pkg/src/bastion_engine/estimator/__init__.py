"""Barrier-state observer, ICL estimator and history stack."""

from .history import (
    HistoryEntry, HistoryStack, WindowBuffer, AdmissionDecision, capture_window, try_admit,
)
from .icl import (
    EstimatorState, ICLGains, GainConditionReport, project, on_boundary, barrier_regressor,
    observer_deriv, theta_deriv, gamma_deriv, check_gain_condition,
)

__all__ = [
    "HistoryEntry", "HistoryStack", "WindowBuffer", "AdmissionDecision", "capture_window", "try_admit",
    "EstimatorState", "ICLGains", "GainConditionReport", "project", "on_boundary", "barrier_regressor",
    "observer_deriv", "theta_deriv", "gamma_deriv", "check_gain_condition",
]
