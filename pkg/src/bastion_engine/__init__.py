"""
Bastion Engine - safe adaptive optimal control via barrier-state augmentation.

Organization:
- core/: dense numerics, RK4 and the flat closed-loop state bundle
- model/: plants, safe-set constraints, barrier operators, augmented dynamics
- estimator/: barrier-state observer, ICL estimator and history stack
- adp/: value-function bases, Bellman-error extrapolation, actor-critic laws
- systems/: one phase of a closed-loop step each
- simulation.py: closed-loop integration, Simulation and run_scenario
- metrics.py: run summary metrics
- oracle.py: scalar LQR comparison against the Riccati solution

Importing the package registers every built-in plant, constraint, barrier
operator and basis with the component registry.
"""

from . import model, adp  # noqa: F401  (component registration)
from .registry import ComponentRegistry, list_all_components

__version__ = "1.0.0"

__all__ = ["ComponentRegistry", "list_all_components", "__version__"]
