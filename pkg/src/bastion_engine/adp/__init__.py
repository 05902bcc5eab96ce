"""Actor-critic approximate dynamic programming over the (augmented) state."""

from .basis import Basis, QuadraticBasis, QuadraticSix, QuadraticThree, QuadraticOne
from .grid import ExtrapolationGrid, GridTerms, build_grid, prepare_grid, control_metric
from .approximation import (
    CriticState, ActorState, BellmanTerms, ExtrapolatedBellman,
    critic_value, policy, actor_control, applied_control, bellman_terms, bellman_error,
    extrapolated_bellman, hjb_residual,
)
from .update_laws import (
    ADPGains, UpsilonClamp, upsilon_clamp, critic_deriv, upsilon_deriv, actor_deriv,
)

__all__ = [
    "Basis", "QuadraticBasis", "QuadraticSix", "QuadraticThree", "QuadraticOne",
    "ExtrapolationGrid", "GridTerms", "build_grid", "prepare_grid", "control_metric",
    "CriticState", "ActorState", "BellmanTerms", "ExtrapolatedBellman",
    "critic_value", "policy", "actor_control", "applied_control", "bellman_terms", "bellman_error",
    "extrapolated_bellman", "hjb_residual",
    "ADPGains", "UpsilonClamp", "upsilon_clamp", "critic_deriv", "upsilon_deriv", "actor_deriv",
]
