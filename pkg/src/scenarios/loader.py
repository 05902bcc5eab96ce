"""
Scenario loading from YAML (or JSON) files.
"""

from __future__ import annotations

import json
from dataclasses import fields
from pathlib import Path
from typing import Any

import yaml

from .schema import ADPConfig, ComponentRef, EstimatorConfig, GridConfig, ScenarioConfig


def _check_keys(data: dict[str, Any], cls, path: str, extra: tuple[str, ...] = ()) -> None:
    allowed = {f.name for f in fields(cls)} | set(extra)
    unknown = set(data) - allowed
    if unknown:
        where = f" in {path}" if path else ""
        raise ValueError(f"unknown key(s){where}: {', '.join(sorted(unknown))}")


def _section(data: dict[str, Any], key: str, cls):
    raw = data.get(key) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"{key} must be a mapping, got {type(raw).__name__}")
    _check_keys(raw, cls, key)
    return cls(**raw)


def scenario_from_dict(data: dict[str, Any]) -> ScenarioConfig:
    """
    Build and validate a ScenarioConfig from parsed data.

    Raises:
        ValueError: missing field, unknown key or invalid value
    """
    if not isinstance(data, dict):
        raise ValueError("scenario must be a mapping at the top level")
    _check_keys(data, ScenarioConfig, "")

    try:
        kwargs: dict[str, Any] = {
            "name": data["name"],
            "plant": ComponentRef.coerce(data["plant"], "plant"),
            "constraint": ComponentRef.coerce(data["constraint"], "constraint"),
            "x0": data["x0"],
        }
    except KeyError as e:
        raise ValueError(f"Missing required field in scenario: {e}")

    if "barrier" in data:
        kwargs["barrier"] = ComponentRef.coerce(data["barrier"], "barrier")
    for key in ("schema_version", "mode", "basis", "duration", "dt", "log_every", "chi"):
        if key in data:
            kwargs[key] = data[key]

    try:
        kwargs["estimator"] = _section(data, "estimator", EstimatorConfig)
        kwargs["adp"] = _section(data, "adp", ADPConfig)
        kwargs["grid"] = _section(data, "grid", GridConfig)
        scenario = ScenarioConfig(**kwargs)
    except TypeError as e:
        raise ValueError(f"Error parsing scenario: {e}")

    scenario.validate()
    return scenario


def load_scenario(path: str) -> ScenarioConfig:
    """
    Load and validate a scenario file.

    Args:
        path: Path to a YAML scenario file (JSON is valid YAML and also accepted)

    Returns:
        Validated ScenarioConfig object

    Raises:
        ValueError: If scenario is invalid
        FileNotFoundError: If file doesn't exist
    """
    path_obj = Path(path)

    if not path_obj.exists():
        raise FileNotFoundError(f"Scenario file not found: {path}")

    with open(path_obj, "r") as f:
        try:
            # PyYAML reads exponent floats without a dot (1e-06) as strings
            if path_obj.suffix.lower() == ".json":
                data = json.load(f)
            else:
                data = yaml.safe_load(f)
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ValueError(f"Error parsing scenario {path}: {e}")

    return scenario_from_dict(data)
