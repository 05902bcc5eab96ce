"""
Resolved run problem: every component instantiated and every matrix sized.

Built from a ScenarioConfig by ``scenarios.factory.build_problem``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .adp.basis import Basis
from .adp.grid import ExtrapolationGrid
from .adp.update_laws import ADPGains
from .estimator.icl import ICLGains
from .model.barrier import BarrierSpec, Constraint
from .model.plant import PlantModel


@dataclass
class Problem:
    name: str
    model: PlantModel
    constraint: Constraint
    spec: Optional[BarrierSpec]       # None when safety is off
    dynamics: object                  # PlantDynamics | SafetyEmbeddedDynamics
    basis: Basis
    grid: ExtrapolationGrid

    x0: np.ndarray
    theta0: np.ndarray
    Gamma0: np.ndarray
    z_hat0: float
    W_c0: np.ndarray
    W_a0: np.ndarray
    Upsilon0: np.ndarray
    Q: np.ndarray
    R: np.ndarray

    icl: ICLGains
    adp: ADPGains
    stack_capacity: int
    delta: float
    window: float
    capture_interval: float

    duration: float
    dt: float
    log_every: int
    chi: float

    @property
    def with_barrier(self) -> bool:
        return self.spec is not None

    @property
    def steps(self) -> int:
        return int(round(self.duration / self.dt))
