"""JSON config loading with field-path diagnostics.

Config errors always name the offending field as a dotted path from the
document root (for example "trial.window_arc_cm: must be a positive ...")
so a bad file can be fixed without reading this module.
"""

from __future__ import annotations

import dataclasses
import json
from typing import NamedTuple, Optional

from .controller import DragFlickParams
from .engine import TrialConfig
from .geometry import DisplayGeometry
from .operators import OperatorParams
from .rate import RateParams
from .techniques import TechniqueParams
from .zones import ZoneThresholds

SCHEMA_VERSION = 1


class ConfigError(Exception):
    """Invalid configuration content; the message carries the field path."""


def _coerce(value, path: str):
    if isinstance(value, list):
        return tuple(_coerce(item, path) for item in value)
    if isinstance(value, dict):
        raise ConfigError(f"{path}: nested objects are not allowed here")
    return value


def build_dataclass(cls, data, path: str):
    """Instantiate a flat dataclass from a JSON object, path-tagging errors."""
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object, got {type(data).__name__}")
    valid = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in valid:
            raise ConfigError(
                f"{path}.{key}: unknown field (expected one of {', '.join(sorted(valid))})")
        kwargs[key] = _coerce(value, f"{path}.{key}")
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def build_technique_params(data, path: str) -> TechniqueParams:
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object, got {type(data).__name__}")
    groups = {"rate": RateParams, "zones": ZoneThresholds, "drag": DragFlickParams}
    kwargs = {}
    for key, value in data.items():
        if key not in groups:
            raise ConfigError(
                f"{path}.{key}: unknown group (expected one of {', '.join(sorted(groups))})")
        kwargs[key] = build_dataclass(groups[key], value, f"{path}.{key}")
    return TechniqueParams(**kwargs)


def load_json(path):
    with open(path, "r") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None


def check_schema_version(data: dict, path: str) -> None:
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"{path}.schema_version: unsupported version {version!r} "
            f"(this build reads version {SCHEMA_VERSION})")


class TrialSetup(NamedTuple):
    """Everything a single simulated trial needs."""

    config: TrialConfig
    operator: OperatorParams
    technique_params: TechniqueParams
    geometry: DisplayGeometry


def load_trial_setup(path) -> TrialSetup:
    """Read a trial config file: {"trial": {...}} plus optional sections."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object at the top level")
    check_schema_version(data, str(path))
    known = {"schema_version", "trial", "operator", "technique_params", "geometry"}
    for key in data:
        if key not in known:
            raise ConfigError(
                f"{path}.{key}: unknown section (expected one of {', '.join(sorted(known))})")
    if "trial" not in data:
        raise ConfigError(f"{path}.trial: required section is missing")
    config = build_dataclass(TrialConfig, data["trial"], "trial")
    operator = (build_dataclass(OperatorParams, data["operator"], "operator")
                if "operator" in data else OperatorParams())
    technique_params = (build_technique_params(data["technique_params"], "technique_params")
                        if "technique_params" in data else TechniqueParams())
    geometry = (build_dataclass(DisplayGeometry, data["geometry"], "geometry")
                if "geometry" in data else DisplayGeometry())
    return TrialSetup(config, operator, technique_params, geometry)
