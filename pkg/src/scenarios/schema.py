"""
Scenario schema definitions and validation.

Matrix-valued fields accept a scalar (times identity), a flat list
(diagonal) or a nested list. Vector-valued fields accept a scalar
(broadcast) or a list. Sizes are only known once the plant and basis are
resolved, so the shape and definiteness checks run through the factory.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Literal, Optional, Union

SCHEMA_VERSION = 1
MODES = ("bas-rl", "no-safety")

Numeric = Union[float, int]
MatrixSpec = Union[Numeric, list]
VectorSpec = Union[Numeric, list]


@dataclass
class ComponentRef:
    """Registry name plus constructor parameters."""
    name: str
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def coerce(cls, value: Union[str, dict[str, Any], "ComponentRef"], path: str) -> "ComponentRef":
        if isinstance(value, ComponentRef):
            return value
        if isinstance(value, str):
            return cls(name=value)
        if isinstance(value, dict):
            unknown = set(value) - {"name", "params"}
            if unknown:
                raise ValueError(f"unknown key(s) in {path}: {', '.join(sorted(unknown))}")
            if "name" not in value:
                raise ValueError(f"{path} dict must have 'name' key")
            params = value.get("params") or {}
            if not isinstance(params, dict):
                raise ValueError(f"{path}.params must be a mapping")
            return cls(name=str(value["name"]), params=dict(params))
        raise ValueError(f"{path} must be a name or a mapping with 'name', got {type(value).__name__}")


@dataclass
class EstimatorConfig:
    """Observer, ICL and history-stack settings."""
    gamma_obs: float = 3.0
    k_theta: float = 50.0
    kappa: float = 1.0
    beta_theta: float = 1.0
    theta_bound: float = 2.0
    delta: float = 0.05
    stack_capacity: int = 20
    window: float = 0.5                 # T, seconds
    capture_interval: float = 0.1       # seconds between capture attempts
    theta0: VectorSpec = 0.0
    Gamma0: MatrixSpec = 10.0
    z_hat0: float = 0.0

    def validate(self) -> None:
        if self.gamma_obs <= 0:
            raise ValueError(f"estimator.gamma_obs must be positive, got {self.gamma_obs}")
        if self.k_theta < 0:
            raise ValueError(f"estimator.k_theta must be non-negative, got {self.k_theta}")
        if self.kappa < 0:
            raise ValueError(f"estimator.kappa must be non-negative, got {self.kappa}")
        if self.beta_theta < 0:
            raise ValueError(f"estimator.beta_theta must be non-negative, got {self.beta_theta}")
        if self.theta_bound <= 0:
            raise ValueError(f"estimator.theta_bound must be positive, got {self.theta_bound}")
        if self.delta <= 0:
            raise ValueError(f"estimator.delta must be positive, got {self.delta}")
        if self.stack_capacity < 1:
            raise ValueError(f"estimator.stack_capacity must be at least 1, got {self.stack_capacity}")
        if self.window <= 0:
            raise ValueError(f"estimator.window must be positive, got {self.window}")
        if self.capture_interval <= 0:
            raise ValueError(f"estimator.capture_interval must be positive, got {self.capture_interval}")


@dataclass
class ADPConfig:
    """Actor-critic gains, cost weights and initial weights."""
    nu: float = 2.0
    k_c1: float = 1.0
    k_c2: float = 1.0
    k_a1: float = 2.0
    k_a2: float = 1.0
    beta_c: float = 0.1
    upsilon_floor: float = 1e-6
    upsilon_ceiling: float = 1000.0
    Q: MatrixSpec = 1.0
    R: MatrixSpec = 1.0
    W_c0: VectorSpec = 0.5
    W_a0: VectorSpec = 0.5
    Upsilon0: MatrixSpec = 0.01

    def validate(self) -> None:
        if self.nu <= 0:
            raise ValueError(f"adp.nu must be positive, got {self.nu}")
        for key in ("k_c1", "k_c2", "k_a1", "k_a2", "beta_c"):
            if getattr(self, key) < 0:
                raise ValueError(f"adp.{key} must be non-negative, got {getattr(self, key)}")
        if self.upsilon_floor < 0:
            raise ValueError(f"adp.upsilon_floor must be non-negative, got {self.upsilon_floor}")
        if self.upsilon_ceiling <= self.upsilon_floor:
            raise ValueError("adp.upsilon_ceiling must exceed adp.upsilon_floor")


@dataclass
class GridConfig:
    """Bellman-error extrapolation box in s-coordinates."""
    count: int = 100
    center: VectorSpec = 0.0
    half_widths: VectorSpec = 2.0
    z_range: list[float] = field(default_factory=lambda: [0.0, 0.1])
    seed: Optional[int] = 0

    def validate(self) -> None:
        if self.count < 1:
            raise ValueError(f"grid.count must be at least 1, got {self.count}")
        if len(self.z_range) != 2 or self.z_range[1] < self.z_range[0]:
            raise ValueError(f"grid.z_range must be [lo, hi] with lo <= hi, got {self.z_range}")
        if self.seed is not None and (not isinstance(self.seed, int) or self.seed < 0):
            raise ValueError(f"grid.seed must be a non-negative integer or null, got {self.seed}")


@dataclass
class ScenarioConfig:
    """Complete scenario configuration."""
    name: str
    plant: ComponentRef
    constraint: ComponentRef
    x0: VectorSpec
    schema_version: int = SCHEMA_VERSION
    mode: Literal["bas-rl", "no-safety"] = "bas-rl"
    barrier: ComponentRef = field(default_factory=lambda: ComponentRef("inverse", {"K": 0.01}))
    basis: str = "quadratic-6"
    duration: float = 10.0
    dt: float = 1e-3
    log_every: int = 1
    chi: float = 1.0
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    adp: ADPConfig = field(default_factory=ADPConfig)
    grid: GridConfig = field(default_factory=GridConfig)

    @property
    def with_barrier(self) -> bool:
        return self.mode == "bas-rl"

    def validate(self) -> None:
        """Validate scalar fields, then resolve components to check shapes and safety."""
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {self.schema_version}, expected {SCHEMA_VERSION}")
        if not self.name:
            raise ValueError("name must be a non-empty string")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.log_every < 1:
            raise ValueError(f"log_every must be at least 1, got {self.log_every}")
        if self.chi <= 0:
            raise ValueError(f"chi must be positive, got {self.chi}")

        self.estimator.validate()
        self.adp.validate()
        self.grid.validate()

        if self.duration < self.estimator.window:
            raise ValueError(
                f"duration ({self.duration}) must be at least estimator.window ({self.estimator.window})"
            )

        # Shapes, definiteness and x0 safety need the resolved components
        from .factory import build_problem
        build_problem(self)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScenarioConfig":
        from .loader import scenario_from_dict
        return scenario_from_dict(data)

    def config_hash(self) -> str:
        """Git blob hash of the canonical JSON form."""
        return config_hash(self.to_dict())

    def with_overrides(self, dt: Optional[float] = None, duration: Optional[float] = None,
                       seed: Optional[int] = None) -> "ScenarioConfig":
        """Copy with run-time overrides applied (and re-validated)."""
        updated = copy.deepcopy(self)
        if dt is not None:
            updated.dt = float(dt)
        if duration is not None:
            updated.duration = float(duration)
        if seed is not None:
            updated.grid.seed = int(seed)
        updated.validate()
        return updated


def canonical_json(data: dict[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data: dict[str, Any]) -> str:
    body = canonical_json(data).encode("utf-8")
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()
