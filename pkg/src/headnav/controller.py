"""Hand-controller baselines: drag-and-flick and push-to-scroll.

Drag-&-Flick moves the workspace with the controller while the button is
held and lets go of it ballistically on release: the flick speed is the
release velocity scaled up, decaying linearly until it stops or the next
press cancels it. Push-&-Release maps joystick deflection through the
same odd power law as the polynomial head mapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .rate import DEFAULT_RATE_PARAMS, RateParams, polynomial


@dataclass(frozen=True)
class DragFlickParams:
    """Drag gain plus flick shape; none of these were published, all are
    configurable (acceptance sweeps over them rather than pinning values).

    full_scale_deg_s: controller velocity mapped to |x| = 1.
    """

    gain: float = 1.0
    flick_multiplier: float = 2.0
    flick_damping: float = 1.5
    full_scale_deg_s: float = 100.0

    def __post_init__(self) -> None:
        if self.gain <= 0.0 or self.flick_multiplier <= 0.0 or self.flick_damping <= 0.0:
            raise ValueError("gain, flick_multiplier and flick_damping must be positive")
        if self.full_scale_deg_s <= 0.0:
            raise ValueError(f"full_scale_deg_s must be positive, got {self.full_scale_deg_s!r}")


DEFAULT_DRAG_PARAMS = DragFlickParams()


class DragPhase(Enum):
    IDLE = "idle"
    DRAGGING = "dragging"
    FLICKING = "flicking"


@dataclass(frozen=True)
class DragFlickState:
    """Controller memory: current phase, release velocity and coast clock."""

    phase: DragPhase = DragPhase.IDLE
    release_velocity: float = 0.0
    since_release_s: float = 0.0


def _checked(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"normalized controller velocity must be finite, got {x!r}")
    if x < -1.0 or x > 1.0:
        raise ValueError(f"normalized controller velocity must lie in [-1, 1], got {x!r}")
    return x


def drag_flick_step(
    state: DragFlickState,
    x: float,
    button_down: bool,
    dt: float,
    params: DragFlickParams = DEFAULT_DRAG_PARAMS,
) -> tuple[DragFlickState, float]:
    """Advance one tick; returns (state, velocity).

    x is the normalized controller velocity this tick. While the button is
    held the output is the clamped drag gain*x (a press always cancels an
    active flick). Releasing with nonzero x starts the flick from that x.
    """
    x = _checked(x)
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be positive and finite, got {dt!r}")

    if button_down:
        y = params.gain * x
        if y > 1.0:
            y = 1.0
        elif y < -1.0:
            y = -1.0
        return DragFlickState(DragPhase.DRAGGING, 0.0, 0.0), y

    if state.phase is DragPhase.DRAGGING:
        if x == 0.0:
            return DragFlickState(), 0.0
        state = DragFlickState(DragPhase.FLICKING, x, 0.0)

    if state.phase is DragPhase.FLICKING:
        since = state.since_release_s + dt
        magnitude = abs(params.flick_multiplier * state.release_velocity) \
            - params.flick_damping * since
        if magnitude <= 0.0:
            return DragFlickState(), 0.0
        if magnitude > 1.0:
            magnitude = 1.0
        y = magnitude if state.release_velocity > 0.0 else -magnitude
        return DragFlickState(DragPhase.FLICKING, state.release_velocity, since), y

    return DragFlickState(), 0.0


def push_release(joystick: float, params: RateParams = DEFAULT_RATE_PARAMS) -> float:
    """Joystick deflection through the odd power law (same curve, same bits)."""
    return polynomial(joystick, params)
