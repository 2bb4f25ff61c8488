"""Zone-based transfer: yaw bands with flick-set workspace velocities.

The normalized input is split by |x| into four bands: Stop (output 0,
memory cleared), Constant (fixed slow speed toward the input side),
Dynamic (variant-dependent behaviour, and the staging area for flicks)
and Flick. Crossing from Dynamic into Flick launches the workspace at a
speed set by how long the head dwelt in Dynamic: a quick swipe gives a
fast flick, a slow one gives a slow flick. What happens to that velocity
when the head later re-enters Dynamic is what distinguishes the four
variants (continuous, friction, additive, interrupted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple


class ZoneKind(Enum):
    STOP = "stop"
    CONSTANT = "constant"
    DYNAMIC = "dynamic"
    FLICK = "flick"


class Zone(NamedTuple):
    """A band plus which side of zero the input sits on (0 for Stop)."""

    kind: ZoneKind
    side: int


class ZoneVariant(Enum):
    """Dynamic-zone behaviour after a flick."""

    CONTINUOUS = "continuous"
    FRICTION = "friction"
    ADDITIVE = "additive"
    INTERRUPTED = "interrupted"


@dataclass(frozen=True)
class ZoneThresholds:
    """Band edges on |x| plus the constants the bands use.

    friction_compounding: apply the friction decrement to the already
        decayed velocity each tick instead of the closed-form decay from
        the flick velocity (alternative reading, off by default).
    additive_unsigned_combine: combine a new flick with the held velocity
        without the flick's sign, reproducing the asymmetric raw reading;
        the default combines sign(x)*flick so that counter-directed flicks
        subtract and mirror symmetry holds exactly.
    """

    stop_edge: float = 0.11
    constant_edge: float = 0.22
    flick_edge: float = 0.44
    constant_speed: float = 0.10
    max_time: float = 2.0
    friction_mu: float = 0.03
    friction_compounding: bool = False
    additive_unsigned_combine: bool = False

    def __post_init__(self) -> None:
        if not (0.0 < self.stop_edge < self.constant_edge < self.flick_edge <= 1.0):
            raise ValueError(
                "zone edges must satisfy 0 < stop_edge < constant_edge <= "
                f"flick_edge <= 1, got {self.stop_edge!r}, {self.constant_edge!r}, "
                f"{self.flick_edge!r}")
        if not (0.0 <= self.constant_speed <= 1.0):
            raise ValueError(f"constant_speed must lie in [0, 1], got {self.constant_speed!r}")
        if self.max_time <= 0.0:
            raise ValueError(f"max_time must be positive, got {self.max_time!r}")
        if self.friction_mu < 0.0:
            raise ValueError(f"friction_mu must be non-negative, got {self.friction_mu!r}")


DEFAULT_ZONE_THRESHOLDS = ZoneThresholds()


@dataclass(frozen=True)
class ZoneState:
    """Per-trial zone-control memory; advance one tick with step_zone.

    dwell_s: time inside the current Dynamic visit (sets the next flick speed).
    decay_s: Dynamic time accumulated since the last flick (friction clock).
    held_velocity: velocity set by the last flick, 0 after Stop.
    flick_pending_reset: a flick happened since the last Dynamic entry, so
        the next Dynamic entry restarts decay_s.
    """

    variant: ZoneVariant
    kind: ZoneKind = ZoneKind.STOP
    dwell_s: float = 0.0
    decay_s: float = 0.0
    held_velocity: float = 0.0
    flick_pending_reset: bool = False

    @classmethod
    def initial(cls, variant: ZoneVariant) -> "ZoneState":
        return cls(variant=variant)


def classify(x: float, thresholds: ZoneThresholds = DEFAULT_ZONE_THRESHOLDS) -> Zone:
    """Assign the normalized input to its band; boundary points go inward."""
    if not math.isfinite(x):
        raise ValueError(f"normalized input must be finite, got {x!r}")
    if x < -1.0 or x > 1.0:
        raise ValueError(f"normalized input must lie in [-1, 1], got {x!r}")
    magnitude = abs(x)
    if magnitude <= thresholds.stop_edge:
        return Zone(ZoneKind.STOP, 0)
    side = 1 if x > 0.0 else -1
    if magnitude <= thresholds.constant_edge:
        return Zone(ZoneKind.CONSTANT, side)
    if magnitude <= thresholds.flick_edge:
        return Zone(ZoneKind.DYNAMIC, side)
    return Zone(ZoneKind.FLICK, side)


def flick_speed(dwell_s: float, thresholds: ZoneThresholds = DEFAULT_ZONE_THRESHOLDS) -> float:
    """Flick speed from the Dynamic dwell time: 1 at zero dwell, 0 beyond max_time."""
    if not (math.isfinite(dwell_s) and dwell_s >= 0.0):
        raise ValueError(f"dwell time must be finite and non-negative, got {dwell_s!r}")
    return max(0.0, thresholds.max_time - dwell_s) / thresholds.max_time


def step_zone(
    state: ZoneState,
    x: float,
    dt: float,
    thresholds: ZoneThresholds = DEFAULT_ZONE_THRESHOLDS,
) -> tuple[ZoneState, float]:
    """Advance the zone state machine one tick; returns (state, velocity)."""
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be positive and finite, got {dt!r}")
    zone = classify(x, thresholds)
    kind = zone.kind
    previous = state.kind

    if kind is ZoneKind.STOP:
        new = replace(state, kind=kind, dwell_s=0.0, decay_s=0.0,
                      held_velocity=0.0, flick_pending_reset=False)
        return new, 0.0

    if kind is ZoneKind.CONSTANT:
        # Held velocity and timers survive a pass through this band.
        y = thresholds.constant_speed if zone.side > 0 else -thresholds.constant_speed
        return replace(state, kind=kind), y

    if kind is ZoneKind.DYNAMIC:
        dwell = state.dwell_s
        decay = state.decay_s
        pending = state.flick_pending_reset
        held = state.held_velocity
        if previous is not ZoneKind.DYNAMIC:
            dwell = 0.0
            if pending:
                decay = 0.0
                pending = False
        dwell = dwell + dt
        decay = decay + dt
        if state.variant is ZoneVariant.CONTINUOUS or state.variant is ZoneVariant.ADDITIVE:
            y = held
        elif state.variant is ZoneVariant.INTERRUPTED:
            held = 0.0
            y = 0.0
        else:  # friction
            magnitude = abs(held) - thresholds.friction_mu * decay
            if magnitude < 0.0:
                magnitude = 0.0
            y = magnitude if held > 0.0 else (-magnitude if held < 0.0 else 0.0)
            if thresholds.friction_compounding:
                held = y
        new = replace(state, kind=kind, dwell_s=dwell, decay_s=decay,
                      held_velocity=held, flick_pending_reset=pending)
        return new, y

    # Flick band: entering it triggers the flick, dwelling in it coasts.
    held = state.held_velocity
    pending = state.flick_pending_reset
    if previous is not ZoneKind.FLICK:
        # A flick skipping Dynamic has no dwell to speak of: treat as max_time.
        dwell = state.dwell_s if previous is ZoneKind.DYNAMIC else thresholds.max_time
        speed = flick_speed(dwell, thresholds)
        if state.variant is ZoneVariant.ADDITIVE:
            if thresholds.additive_unsigned_combine:
                combined = abs(held + speed)
            else:
                combined = abs(held + (speed if zone.side > 0 else -speed))
            if combined > 1.0:
                combined = 1.0
            held = combined if zone.side > 0 else -combined
        else:
            held = speed if zone.side > 0 else -speed
        pending = True
    new = replace(state, kind=kind, held_velocity=held, flick_pending_reset=pending)
    return new, held


ZONE_VARIANTS = {variant.value: variant for variant in ZoneVariant}
