"""Technique registry: the nine selectable input-to-velocity pipelines."""

from __future__ import annotations

from dataclasses import dataclass

from .controller import DragFlickParams
from .rate import RateParams
from .zones import ZoneThresholds

RATE_TECHNIQUES = ("linear", "sigmoid", "polynomial")
ZONE_TECHNIQUES = ("continuous", "friction", "additive", "interrupted")
HEAD_TECHNIQUES = RATE_TECHNIQUES + ZONE_TECHNIQUES
CONTROLLER_TECHNIQUES = ("drag_flick", "push_release")
ALL_TECHNIQUES = HEAD_TECHNIQUES + CONTROLLER_TECHNIQUES


@dataclass(frozen=True)
class TechniqueParams:
    """Every tunable constant of every technique, bundled for config echo."""

    rate: RateParams = RateParams()
    zones: ZoneThresholds = ZoneThresholds()
    drag: DragFlickParams = DragFlickParams()


DEFAULT_TECHNIQUE_PARAMS = TechniqueParams()


def technique_family(technique: str) -> str:
    """One of "rate", "zone", "drag", "push"."""
    if technique in RATE_TECHNIQUES:
        return "rate"
    if technique in ZONE_TECHNIQUES:
        return "zone"
    if technique == "drag_flick":
        return "drag"
    if technique == "push_release":
        return "push"
    raise ValueError(
        f"unknown technique {technique!r}; expected one of {', '.join(ALL_TECHNIQUES)}")
