"""Plant, safe-set and augmented-dynamics definitions."""

from .plant import PlantModel, CaseStudyPlant, ScalarLinearPlant
from .barrier import (
    Constraint, CircularObstacle, BarrierOperator, InverseBarrier, BarrierSpec,
    AugState, eval_beta, eval_phi, augment, is_safe,
)
from .dynamics import plant_deriv, aug_maps, make_dynamics, PlantDynamics, SafetyEmbeddedDynamics

__all__ = [
    "PlantModel", "CaseStudyPlant", "ScalarLinearPlant",
    "Constraint", "CircularObstacle", "BarrierOperator", "InverseBarrier", "BarrierSpec",
    "AugState", "eval_beta", "eval_phi", "augment", "is_safe",
    "plant_deriv", "aug_maps", "make_dynamics", "PlantDynamics", "SafetyEmbeddedDynamics",
]
