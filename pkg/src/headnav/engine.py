"""Fixed-timestep trial loop: task geometry, press protocol, measures.

One trial: the workspace starts with the frame centered at 0 degrees and
the target placed off-window at the configured arc distance (or at a
sequence of markers). Each tick the operator acts, the selected technique
converts its input into a normalized velocity, the workspace integrates
and wraps, and the press protocol decides selection. Head techniques move
only while a long press (> long_press_ms) is active; a short press that
releases while the target is fully inside the frame is the selection.

All per-tick numeric work is delegated to a backend kernel (see core);
the pure-Python kernel is the reference and the compiled one must match
it bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Optional, Sequence

from .core import run_kernel
from .core.params import (CONTAINMENT_NAMES, DRAG_PHASE_NAMES, EVENT_NAMES,
                          ZONE_KIND_NAMES, prepare)
from .geometry import DisplayGeometry, arc_to_angle, wrap_signed, wrap_workspace
from .operators import DEFAULT_OPERATOR_PARAMS, OperatorParams
from .techniques import ALL_TECHNIQUES, DEFAULT_TECHNIQUE_PARAMS, TechniqueParams, technique_family

SIDES = ("left", "right")
CLOCK_STARTS = ("press", "movement")


class Containment(Enum):
    OUTSIDE = "outside"
    PARTIAL = "partial"
    CONTAINED = "contained"


_CONTAINMENT_BY_CODE = (Containment.OUTSIDE, Containment.PARTIAL, Containment.CONTAINED)


class ButtonEvent(NamedTuple):
    """A press or release edge, for trace analysis."""

    timestamp_s: float
    kind: str  # "press" or "release"


@dataclass(frozen=True)
class TrialConfig:
    """One trial: technique, task geometry and protocol constants.

    markers_deg turns the trial into a marker sequence (visit_order gives
    the leg order); target_distance_cm/side are ignored for placement
    then, but keep their defaults for reporting.
    """

    mapping: str
    window_arc_cm: float = 600.0
    target_distance_cm: float = 750.0
    side: str = "right"
    target_width_cm: float = 30.0
    frame_width_cm: float = 70.0
    long_press_ms: float = 300.0
    tick_hz: int = 120
    seed: int = 0
    budget_s: float = 120.0
    clock_start: str = "press"
    markers_deg: Optional[tuple] = None
    visit_order: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.mapping not in ALL_TECHNIQUES:
            raise ValueError(
                f"unknown mapping {self.mapping!r}; expected one of {', '.join(ALL_TECHNIQUES)}")
        if self.side not in SIDES:
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if self.clock_start not in CLOCK_STARTS:
            raise ValueError(
                f"clock_start must be 'press' or 'movement', got {self.clock_start!r}")
        for name in ("window_arc_cm", "target_distance_cm", "target_width_cm",
                     "frame_width_cm", "long_press_ms", "budget_s"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if not (isinstance(self.tick_hz, int) and self.tick_hz > 0):
            raise ValueError(f"tick_hz must be a positive integer, got {self.tick_hz!r}")
        if not isinstance(self.seed, int):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        if self.frame_width_cm < self.target_width_cm:
            raise ValueError(
                f"frame_width_cm ({self.frame_width_cm}) must be at least "
                f"target_width_cm ({self.target_width_cm})")
        if self.markers_deg is not None:
            markers = tuple(float(m) for m in self.markers_deg)
            if len(markers) == 0:
                raise ValueError("markers_deg must not be empty")
            for m in markers:
                if not (math.isfinite(m) and 0.0 <= m < 360.0):
                    raise ValueError(f"markers_deg entries must lie in [0, 360), got {m!r}")
            object.__setattr__(self, "markers_deg", markers)
        if self.visit_order is not None:
            if self.markers_deg is None:
                raise ValueError("visit_order requires markers_deg")
            order = tuple(int(i) for i in self.visit_order)
            if sorted(order) != list(range(len(self.markers_deg))):
                raise ValueError(
                    f"visit_order must be a permutation of 0..{len(self.markers_deg) - 1}, "
                    f"got {order!r}")
            object.__setattr__(self, "visit_order", order)

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_hz

    @property
    def budget_ticks(self) -> int:
        return int(round(self.budget_s * self.tick_hz))

    @property
    def long_press_ticks(self) -> int:
        return int(round(self.long_press_ms / 1000.0 * self.tick_hz))


class TickRecord(NamedTuple):
    """One logged tick; column order matches TICK_LOG_COLUMNS."""

    tick: int
    time_s: float
    yaw_deg: float
    x_norm: float
    zone_or_phase: str
    y_norm: float
    workspace_deg: float
    containment: str
    button: int
    event: str


TICK_LOG_COLUMNS = ("tick", "time_s", "yaw_deg", "x_norm", "zone_or_phase",
                    "y_norm", "workspace_deg", "containment", "button", "event")


@dataclass(frozen=True)
class TrialResult:
    """The four reported measures plus the optional tick trace."""

    trial_time_s: float
    total_head_rotation_deg: float
    crossings: int
    additional_attempts: int
    success: bool
    tick_log: Optional[list] = field(default=None, compare=False)


def integrate(workspace_deg: float, y: float, geometry: DisplayGeometry, dt: float) -> float:
    """Explicit Euler step of the workspace angle, capped at |y| = 1."""
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be positive and finite, got {dt!r}")
    if y > 1.0:
        y = 1.0
    elif y < -1.0:
        y = -1.0
    return wrap_workspace(workspace_deg + y * geometry.max_workspace_speed_deg_s * dt)


def containment_thresholds(cfg: TrialConfig, geometry: DisplayGeometry) -> tuple[float, float]:
    """(contained, partial-overlap) angular distance thresholds between centers."""
    frame_angle = arc_to_angle(cfg.frame_width_cm, geometry)
    target_angle = arc_to_angle(cfg.target_width_cm, geometry)
    return (frame_angle - target_angle) / 2.0, (frame_angle + target_angle) / 2.0


def containment(target_center_deg: float, frame_center_deg: float,
                geometry: DisplayGeometry, cfg: TrialConfig) -> Containment:
    """Where the target sits relative to the frame: fully inside, overlapping, or out."""
    contained_thr, partial_thr = containment_thresholds(cfg, geometry)
    distance = abs(wrap_signed(target_center_deg - frame_center_deg))
    if distance <= contained_thr:
        return Containment.CONTAINED
    if distance < partial_thr:
        return Containment.PARTIAL
    return Containment.OUTSIDE


def count_crossing(prev: Optional[Containment], now: Containment) -> int:
    """1 on a transition into containment (prev=None marks trial/leg start)."""
    if now is Containment.CONTAINED and prev is not Containment.CONTAINED:
        return 1
    return 0


def button_events(tick_log: Sequence[TickRecord]) -> list[ButtonEvent]:
    """Press/release edges from a tick trace, in order."""
    events = []
    down = False
    for row in tick_log:
        if bool(row.button) != down:
            down = bool(row.button)
            events.append(ButtonEvent(row.time_s, "press" if down else "release"))
    return events


def initial_target_deg(cfg: TrialConfig, geometry: DisplayGeometry) -> tuple:
    """Target workspace angles for every leg of the trial, in visit order."""
    if cfg.markers_deg is not None:
        order = cfg.visit_order if cfg.visit_order is not None else tuple(
            range(len(cfg.markers_deg)))
        return tuple(cfg.markers_deg[i] for i in order)
    distance_angle = arc_to_angle(cfg.target_distance_cm, geometry)
    signed = distance_angle if cfg.side == "right" else -distance_angle
    return (wrap_workspace(signed),)


def _format_log(raw, family: str) -> list:
    rows = []
    dt = raw.dt
    for i in range(raw.log_count):
        if family == "zone":
            phase = ZONE_KIND_NAMES[raw.log_phase[i]]
        elif family == "drag":
            phase = DRAG_PHASE_NAMES[raw.log_phase[i]]
        else:
            phase = "-"
        rows.append(TickRecord(
            tick=i,
            time_s=i * dt,
            yaw_deg=float(raw.log_yaw[i]),
            x_norm=float(raw.log_x[i]),
            zone_or_phase=phase,
            y_norm=float(raw.log_y[i]),
            workspace_deg=float(raw.log_workspace[i]),
            containment=CONTAINMENT_NAMES[int(raw.log_containment[i])],
            button=int(raw.log_button[i]),
            event=EVENT_NAMES[int(raw.log_event[i])],
        ))
    return rows


def run_trial(cfg: TrialConfig, operator: Optional[OperatorParams] = None,
              technique_params: Optional[TechniqueParams] = None, *,
              geometry: Optional[DisplayGeometry] = None,
              collect_log: bool = False, replay=None) -> TrialResult:
    """Simulate one trial to selection or budget timeout.

    operator is the synthetic participant's parameterization (ignored when
    replay, a ReplayTrace, drives the inputs instead). The trial seed
    comes from cfg.seed; OperatorParams.seed is only a standalone fallback.
    """
    if operator is None:
        operator = DEFAULT_OPERATOR_PARAMS
    if technique_params is None:
        technique_params = DEFAULT_TECHNIQUE_PARAMS
    if geometry is None:
        geometry = DisplayGeometry()
    if geometry.window_arc_cm != cfg.window_arc_cm:
        geometry = replace(geometry, window_arc_cm=cfg.window_arc_cm)
    contained_thr, partial_thr = containment_thresholds(cfg, geometry)
    targets = initial_target_deg(cfg, geometry)
    inputs = prepare(cfg, operator, technique_params, geometry,
                     contained_thr, partial_thr, targets, replay, collect_log)
    raw = run_kernel(inputs)
    tick_log = _format_log(raw, technique_family(cfg.mapping)) if collect_log else None
    return TrialResult(
        trial_time_s=raw.trial_time_s,
        total_head_rotation_deg=raw.head_rotation_deg,
        crossings=raw.crossings,
        additional_attempts=raw.additional_attempts,
        success=raw.success,
        tick_log=tick_log,
    )
