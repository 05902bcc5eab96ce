"""
Scenario loading and configuration.
"""

from .schema import ScenarioConfig, EstimatorConfig, ADPConfig, GridConfig, ComponentRef
from .loader import load_scenario, scenario_from_dict
from .factory import build_problem, resolve_matrix, resolve_vector
from .presets import case_study_config, lqr_scalar_config

__all__ = [
    "ScenarioConfig", "EstimatorConfig", "ADPConfig", "GridConfig", "ComponentRef",
    "load_scenario", "scenario_from_dict", "build_problem", "resolve_matrix", "resolve_vector",
    "case_study_config", "lqr_scalar_config",
]
