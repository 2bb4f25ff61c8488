"""Synthetic trial operators: deterministic closed-loop input generators.

An Operator plays the participant: it observes the signed angular error of
the target from the frame center and emits head yaw, controller velocity,
joystick deflection and the button state, one tick at a time. Two
strategies are provided. "greedy_saturate" drives the input to full
deflection and retreats when the predicted stopping point falls inside the
aim tolerance; "proportional" scales the command with the remaining error.
Zone techniques use a gesture planner that inverts the dwell law to hit a
requested flick speed and predicts the drift of the head's return path.

All randomness is head-tracker yaw noise, drawn once per trial from a
seeded generator (make_yaw_noise); the emitted yaw trace is rate-limited
after noise is added, so |yaw[k] - yaw[k-1]| <= max_head_rate * dt always
holds. Strategy internals (approach bands, creep deflections, stroke
lengths) are module constants below; they are simulator plumbing, not
published quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .controller import DragFlickParams, DragPhase, DragFlickState
from .rate import RATE_FUNCTIONS
from .techniques import DEFAULT_TECHNIQUE_PARAMS, TechniqueParams, technique_family
from .zones import ZoneKind, ZoneState, ZoneThresholds, ZoneVariant, step_zone

STRATEGIES = ("greedy_saturate", "proportional")

# How many consecutive contained observations before selecting.
SELECT_STREAK_TICKS = 2

# Strategy internals (degrees / normalized units / seconds).
FINE_BAND_DEG = 25.0        # drag: below this error, drag slowly instead of full speed
FLICK_WORTH_DEG = 60.0      # drag: errors at least this large earn a ballistic flick
RESTROKE_SPEED = 0.85       # drag: re-stroke once the coast decays below this speed
FINE_DRAG_X = 0.15          # drag: slow-drag deflection
PUSH_SLOW_BAND_DEG = 5.0    # push: creep once the error is this small
PUSH_CREEP_X = 0.35         # push: creep deflection
STROKE_S = 0.45             # drag: minimum stroke length before a flick release
PROP_GAIN_DEG_PER_DEG = 1.0      # proportional: yaw command per degree of error
PROP_FLICK_FLOOR = 0.25          # proportional: slowest requested flick speed
PROP_DRAG_FLOOR = 0.2            # proportional: minimum drag deflection
FLICK_REST_MARGIN_DEG = 10.0     # zone: how far past the flick edge the head parks
ZONE_FLICK_BAND_MARGIN_DEG = 5.0  # zone: extra error margin before flicking pays off


@dataclass(frozen=True)
class OperatorParams:
    """Operator behaviour knobs.

    aim_tolerance_deg defaults to half the containment slack so a stop
    inside tolerance is always a contained stop. seed is only a fallback
    for standalone use; in a trial the TrialConfig seed is authoritative.
    """

    reaction_delay_s: float = 0.2
    max_head_rate_deg_s: float = 120.0
    yaw_noise_sd_deg: float = 0.5
    aim_tolerance_deg: Optional[float] = None
    strategy: str = "greedy_saturate"
    seed: Optional[int] = None
    short_press_s: float = 0.1
    flick_speed_request: float = 1.0

    def __post_init__(self) -> None:
        if self.reaction_delay_s < 0.0:
            raise ValueError(f"reaction_delay_s must be >= 0, got {self.reaction_delay_s!r}")
        if self.max_head_rate_deg_s <= 0.0:
            raise ValueError(f"max_head_rate_deg_s must be > 0, got {self.max_head_rate_deg_s!r}")
        if self.yaw_noise_sd_deg < 0.0:
            raise ValueError(f"yaw_noise_sd_deg must be >= 0, got {self.yaw_noise_sd_deg!r}")
        if self.aim_tolerance_deg is not None and self.aim_tolerance_deg <= 0.0:
            raise ValueError(f"aim_tolerance_deg must be > 0, got {self.aim_tolerance_deg!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.short_press_s <= 0.0:
            raise ValueError(f"short_press_s must be > 0, got {self.short_press_s!r}")
        if not (0.0 < self.flick_speed_request <= 1.0):
            raise ValueError(
                f"flick_speed_request must lie in (0, 1], got {self.flick_speed_request!r}")


DEFAULT_OPERATOR_PARAMS = OperatorParams()


class TrialObservation(NamedTuple):
    """What the operator sees each tick (state after the previous tick)."""

    error_deg: float
    contained: bool
    movement_enabled: bool
    last_velocity: float
    zone_state: Optional[ZoneState] = None
    drag_state: Optional[DragFlickState] = None


class OperatorAction(NamedTuple):
    """Per-tick output channels."""

    yaw_deg: float
    controller_velocity_deg_s: float
    joystick: float
    button_down: bool


def plan_flick_dwell(requested_speed: float,
                     thresholds: ZoneThresholds = ZoneThresholds()) -> float:
    """Dynamic-zone dwell that produces the requested flick speed."""
    if not (0.0 < requested_speed <= 1.0):
        raise ValueError(f"requested speed must lie in (0, 1], got {requested_speed!r}")
    return thresholds.max_time * (1.0 - requested_speed)


def make_yaw_noise(params: OperatorParams, ticks: int, seed: int) -> Optional[np.ndarray]:
    """Per-tick yaw tracker noise for one trial, or None when disabled."""
    if params.yaw_noise_sd_deg == 0.0:
        return None
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.standard_normal(ticks) * params.yaw_noise_sd_deg


def _step_toward(value: float, target: float, step: float) -> float:
    if target > value:
        advanced = value + step
        return target if advanced > target else advanced
    if target < value:
        advanced = value - step
        return target if advanced < target else advanced
    return value


def rate_brake_drift(cmd_deg: float, rate_fn, *, half_range_deg: float,
                     max_step_deg: float, stop_deg: float,
                     vmax_deg_s: float, dt: float) -> float:
    """Workspace travel while the head ramps from cmd_deg back to rest.

    Mirrors the engine exactly with noise off: one step per tick starting
    next tick, velocity evaluated after each step until the dead zone.
    """
    drift = 0.0
    yaw = abs(cmd_deg)
    while yaw > stop_deg:
        yaw = yaw - max_step_deg
        if yaw < 0.0:
            yaw = 0.0
        y = rate_fn(yaw / half_range_deg)
        drift += abs(y) * vmax_deg_s * dt
    return drift


def zone_return_drift(held_velocity: float, variant: ZoneVariant,
                      thresholds: ZoneThresholds, *, start_deg: float,
                      stop_deg: float, half_range_deg: float,
                      max_step_deg: float, vmax_deg_s: float, dt: float) -> float:
    """Workspace travel while the head returns from the flick band to rest.

    Simulates the actual zone state machine along the ramp, so the variant
    semantics (hold, decay, zero) are accounted for tick by tick.
    """
    state = ZoneState(variant=variant, kind=ZoneKind.FLICK,
                      held_velocity=abs(held_velocity), flick_pending_reset=True)
    drift = 0.0
    yaw = abs(start_deg)
    while yaw > stop_deg:
        yaw = yaw - max_step_deg
        if yaw < 0.0:
            yaw = 0.0
        state, y = step_zone(state, yaw / half_range_deg, dt, thresholds)
        drift += abs(y) * vmax_deg_s * dt
    return drift


def creep_back_drift(cmd_deg: float, thresholds: ZoneThresholds, *,
                     stop_deg: float, max_step_deg: float,
                     vmax_deg_s: float, dt: float) -> float:
    """Workspace travel while the head retreats from the Constant band."""
    drift = 0.0
    yaw = abs(cmd_deg)
    while yaw > stop_deg:
        yaw = yaw - max_step_deg
        if yaw > stop_deg:
            drift += thresholds.constant_speed * vmax_deg_s * dt
    return drift


# Operator top-level modes.
MODE_WAIT = 0
MODE_ENGAGE = 1
MODE_NAV = 2
MODE_RELEASE = 3
MODE_SELECT = 4

# Rate navigation phases.
R_SETTLE = 0
R_APPROACH = 1
R_BRAKE = 2

# Zone navigation phases.
Z_SETTLE = 0
Z_OUT = 1
Z_COAST = 2
Z_RETURN = 3
Z_CREEP = 4
Z_CREEP_BACK = 5

# Drag navigation phases.
D_IDLE = 0
D_STROKE = 1
D_STROKE_END = 2
D_COAST = 3
D_STOP_PRESS = 4


def derived_constants(params: OperatorParams, technique: str,
                      technique_params: TechniqueParams, *, dt: float,
                      vmax_deg_s: float, long_press_s: float,
                      contained_threshold_deg: float,
                      half_range_deg: float = 90.0) -> dict:
    """Trial-constant scalars shared by the reference and compiled loops."""
    family = technique_family(technique)
    delay_ticks = int(round(params.reaction_delay_s / dt))
    short_ticks = int(round(params.short_press_s / dt))
    long_ticks = int(round(long_press_s / dt))
    if short_ticks < 1:
        short_ticks = 1
    if short_ticks >= long_ticks:
        raise ValueError(
            f"short_press_s ({params.short_press_s}) must stay below the long-press "
            f"threshold ({long_press_s})")
    max_step = params.max_head_rate_deg_s * dt
    aim_tol = params.aim_tolerance_deg
    if aim_tol is None:
        aim_tol = contained_threshold_deg / 2.0
    zones = technique_params.zones
    stop_deg = zones.stop_edge * half_range_deg
    const_mid = (zones.stop_edge + zones.constant_edge) * 0.5 * half_range_deg
    dyn_mid = (zones.constant_edge + zones.flick_edge) * 0.5 * half_range_deg
    dyn_hi = zones.flick_edge * half_range_deg
    flick_rest = dyn_hi + FLICK_REST_MARGIN_DEG
    if flick_rest > half_range_deg:
        flick_rest = half_range_deg
    out = {
        "family": family,
        "greedy": params.strategy == "greedy_saturate",
        "delay_ticks": delay_ticks,
        "short_ticks": short_ticks,
        "long_ticks": long_ticks,
        "max_step": max_step,
        "aim_tol": aim_tol,
        "stop_deg": stop_deg,
        "const_mid": const_mid,
        "dyn_mid": dyn_mid,
        "dyn_hi": dyn_hi,
        "flick_rest": flick_rest,
        "stroke_ticks": max(long_ticks + 2, int(round(STROKE_S / dt))),
        "prune_drift": 0.0,
        "flick_band": 0.0,
    }
    if family == "rate":
        fn = RATE_FUNCTIONS[technique]
        rp = technique_params.rate
        rate_fn = lambda x: fn(x, rp)  # noqa: E731
        dmax = rate_brake_drift(half_range_deg, rate_fn,
                                half_range_deg=half_range_deg, max_step_deg=max_step,
                                stop_deg=rp.dead_zone * half_range_deg,
                                vmax_deg_s=vmax_deg_s, dt=dt)
        out["prune_drift"] = dmax + aim_tol
        out["stop_deg"] = rp.dead_zone * half_range_deg
    elif family == "zone":
        variant = ZoneVariant(technique)
        dmax = zone_return_drift(1.0, variant, zones, start_deg=flick_rest,
                                 stop_deg=stop_deg, half_range_deg=half_range_deg,
                                 max_step_deg=max_step, vmax_deg_s=vmax_deg_s, dt=dt)
        out["flick_band"] = dmax + aim_tol + ZONE_FLICK_BAND_MARGIN_DEG
    return out


class Operator:
    """Closed-loop synthetic participant for one trial."""

    def __init__(self, params: OperatorParams, technique: str,
                 technique_params: TechniqueParams = DEFAULT_TECHNIQUE_PARAMS, *,
                 dt: float, vmax_deg_s: float, long_press_s: float = 0.3,
                 contained_threshold_deg: float, half_range_deg: float = 90.0):
        self.params = params
        self.technique = technique
        self.technique_params = technique_params
        self._dt = dt
        self._vmax = vmax_deg_s
        self._half = half_range_deg
        consts = derived_constants(
            params, technique, technique_params, dt=dt, vmax_deg_s=vmax_deg_s,
            long_press_s=long_press_s, contained_threshold_deg=contained_threshold_deg,
            half_range_deg=half_range_deg)
        self._family = consts["family"]
        self._greedy = consts["greedy"]
        self._delay_ticks = consts["delay_ticks"]
        self._short_ticks = consts["short_ticks"]
        self._long_ticks = consts["long_ticks"]
        self._max_step = consts["max_step"]
        self._aim_tol = consts["aim_tol"]
        self._stop_deg = consts["stop_deg"]
        self._const_mid = consts["const_mid"]
        self._dyn_mid = consts["dyn_mid"]
        self._dyn_hi = consts["dyn_hi"]
        self._flick_rest = consts["flick_rest"]
        self._stroke_ticks = consts["stroke_ticks"]
        self._prune_drift = consts["prune_drift"]
        self._flick_band = consts["flick_band"]
        if self._family == "rate":
            fn = RATE_FUNCTIONS[technique]
            rp = technique_params.rate
            self._rate_fn = lambda x: fn(x, rp)
        else:
            self._rate_fn = None
        self.reset()

    def reset(self) -> None:
        self._mode = MODE_WAIT
        self._mode_ticks = 0
        self._nav_phase = 0
        self._cmd = 0.0
        self._yaw = 0.0
        self._ctrl = 0.0
        self._joy = 0.0
        self._button = False
        self._press_ticks = 0
        self._streak = 0
        self._dir = 1.0
        self._coast_drift = 0.0
        self._dwell_need = 0.0
        self._stroke_flick = False

    # -- prediction wrappers ------------------------------------------------

    def _brake_drift(self, cmd: float) -> float:
        return rate_brake_drift(cmd, self._rate_fn, half_range_deg=self._half,
                                max_step_deg=self._max_step, stop_deg=self._stop_deg,
                                vmax_deg_s=self._vmax, dt=self._dt)

    def _return_drift(self, held: float) -> float:
        return zone_return_drift(held, ZoneVariant(self.technique),
                                 self.technique_params.zones,
                                 start_deg=self._cmd, stop_deg=self._stop_deg,
                                 half_range_deg=self._half, max_step_deg=self._max_step,
                                 vmax_deg_s=self._vmax, dt=self._dt)

    def _creep_drift(self, cmd: float) -> float:
        return creep_back_drift(cmd, self.technique_params.zones,
                                stop_deg=self._stop_deg, max_step_deg=self._max_step,
                                vmax_deg_s=self._vmax, dt=self._dt)

    def _ticks_to_cross(self, yaw_abs: float) -> int:
        ticks = 0
        c = yaw_abs
        while c <= self._dyn_hi:
            c = c + self._max_step
            ticks += 1
        return ticks

    # -- mode machinery -----------------------------------------------------

    def _enter(self, mode: int) -> None:
        self._mode = mode
        self._mode_ticks = 0

    def _begin_select(self) -> None:
        if self._family == "rate" or self._family == "zone":
            self._enter(MODE_RELEASE)
        else:
            self._enter(MODE_SELECT)

    # -- family navigation --------------------------------------------------

    def _nav_rate(self, obs: TrialObservation) -> None:
        self._button = True
        e = obs.error_deg
        mag = abs(e)
        phase = self._nav_phase
        if phase == R_SETTLE:
            self._cmd = 0.0
            if obs.contained:
                if self._streak >= SELECT_STREAK_TICKS:
                    self._begin_select()
            elif mag > self._aim_tol:
                self._nav_phase = R_APPROACH
        elif phase == R_APPROACH:
            direction = 1.0 if e > 0.0 else -1.0
            if mag <= self._aim_tol:
                self._nav_phase = R_BRAKE
            elif self._greedy:
                cand = _step_toward(self._cmd, direction * self._half, self._max_step)
                if mag > self._prune_drift:
                    self._cmd = cand
                else:
                    drift_now = self._brake_drift(self._cmd)
                    if drift_now + self._aim_tol >= mag:
                        self._nav_phase = R_BRAKE
                    else:
                        drift_cand = self._brake_drift(cand)
                        if drift_cand + self._aim_tol < mag:
                            self._cmd = cand
                        # otherwise hold: one more step would overshoot
            else:
                reach = self._stop_deg + PROP_GAIN_DEG_PER_DEG * mag
                if reach > self._half:
                    reach = self._half
                self._cmd = _step_toward(self._cmd, direction * reach, self._max_step)
        else:  # R_BRAKE
            self._cmd = _step_toward(self._cmd, 0.0, self._max_step)
            if self._cmd == 0.0:
                self._nav_phase = R_SETTLE

    def _nav_zone(self, obs: TrialObservation) -> None:
        self._button = True
        e = obs.error_deg
        mag = abs(e)
        phase = self._nav_phase
        zs = obs.zone_state
        if phase == Z_SETTLE:
            self._cmd = 0.0
            if obs.contained:
                if self._streak >= SELECT_STREAK_TICKS:
                    self._begin_select()
            elif mag > self._aim_tol:
                self._dir = 1.0 if e > 0.0 else -1.0
                if mag >= self._flick_band:
                    if self._greedy:
                        v_req = self.params.flick_speed_request
                    else:
                        v_req = mag / 180.0
                        if v_req < PROP_FLICK_FLOOR:
                            v_req = PROP_FLICK_FLOOR
                        if v_req > 1.0:
                            v_req = 1.0
                    self._dwell_need = self.technique_params.zones.max_time * (1.0 - v_req)
                    self._nav_phase = Z_OUT
                else:
                    self._nav_phase = Z_CREEP
        elif phase == Z_OUT:
            hold = False
            if self._dwell_need > 0.0 and zs is not None and zs.kind is ZoneKind.DYNAMIC:
                transit = self._ticks_to_cross(abs(self._cmd)) * self._dt
                if zs.dwell_s + transit < self._dwell_need:
                    hold = True
            target = self._dir * (self._dyn_mid if hold else self._flick_rest)
            self._cmd = _step_toward(self._cmd, target, self._max_step)
            if zs is not None and zs.kind is ZoneKind.FLICK:
                self._coast_drift = self._return_drift(zs.held_velocity)
                self._nav_phase = Z_COAST
        elif phase == Z_COAST:
            self._cmd = self._dir * self._flick_rest
            if mag <= self._coast_drift + self._aim_tol:
                self._nav_phase = Z_RETURN
        elif phase == Z_RETURN:
            self._cmd = _step_toward(self._cmd, 0.0, self._max_step)
            if self._cmd == 0.0:
                self._nav_phase = Z_SETTLE
        elif phase == Z_CREEP:
            self._cmd = _step_toward(self._cmd, self._dir * self._const_mid, self._max_step)
            back = self._creep_drift(self._cmd)
            if mag <= back + self._aim_tol or e * self._dir < 0.0:
                self._nav_phase = Z_CREEP_BACK
        else:  # Z_CREEP_BACK
            self._cmd = _step_toward(self._cmd, 0.0, self._max_step)
            if self._cmd == 0.0:
                self._nav_phase = Z_SETTLE

    def _nav_drag(self, obs: TrialObservation) -> None:
        e = obs.error_deg
        mag = abs(e)
        phase = self._nav_phase
        ds = obs.drag_state
        drag_idle = ds is None or ds.phase is DragPhase.IDLE
        if phase == D_IDLE:
            self._button = False
            self._ctrl = 0.0
            if obs.contained:
                if self._streak >= SELECT_STREAK_TICKS and drag_idle:
                    self._begin_select()
            elif mag > self._aim_tol:
                self._dir = 1.0 if e > 0.0 else -1.0
                self._press_ticks = 0
                self._stroke_flick = self._greedy and mag >= FLICK_WORTH_DEG
                self._nav_phase = D_STROKE
        elif phase == D_STROKE:
            self._button = True
            self._press_ticks += 1
            if mag <= self._aim_tol:
                self._ctrl = 0.0
                self._nav_phase = D_STROKE_END
            else:
                if self._greedy:
                    xmag = 1.0 if mag > FINE_BAND_DEG else FINE_DRAG_X
                else:
                    xmag = PROP_DRAG_FLOOR + mag / self._half
                    if xmag > 1.0:
                        xmag = 1.0
                self._ctrl = self._dir * xmag
                if self._stroke_flick and self._press_ticks >= self._stroke_ticks:
                    self._button = False  # release mid-motion: the flick
                    self._nav_phase = D_COAST
        elif phase == D_STROKE_END:
            self._button = True
            self._ctrl = 0.0
            self._press_ticks += 1
            if self._press_ticks > self._long_ticks + 1:
                self._button = False
                self._nav_phase = D_IDLE
        elif phase == D_COAST:
            self._button = False
            self._ctrl = 0.0
            speed = abs(obs.last_velocity)
            if mag <= self._aim_tol:
                self._press_ticks = 0
                self._nav_phase = D_STOP_PRESS
            elif speed <= RESTROKE_SPEED:
                drag = self.technique_params.drag
                coast_left = speed * speed * self._vmax / (2.0 * drag.flick_damping)
                if coast_left < mag - self._aim_tol and mag > FINE_BAND_DEG:
                    self._press_ticks = 0
                    self._stroke_flick = self._greedy and mag >= FLICK_WORTH_DEG
                    self._nav_phase = D_STROKE
                elif drag_idle:
                    self._nav_phase = D_IDLE
            elif drag_idle:
                self._nav_phase = D_IDLE
        else:  # D_STOP_PRESS: cancel the coast, hold past the long-press bar
            self._button = True
            self._ctrl = 0.0
            self._press_ticks += 1
            if self._press_ticks > self._long_ticks + 1:
                self._button = False
                self._nav_phase = D_IDLE

    def _nav_push(self, obs: TrialObservation) -> None:
        self._button = False
        e = obs.error_deg
        mag = abs(e)
        if obs.contained and self._streak >= SELECT_STREAK_TICKS and self._joy == 0.0:
            self._begin_select()
            return
        if mag <= self._aim_tol:
            self._joy = 0.0
        else:
            direction = 1.0 if e > 0.0 else -1.0
            if self._greedy:
                jmag = 1.0 if mag > PUSH_SLOW_BAND_DEG else PUSH_CREEP_X
            else:
                jmag = mag / self._half
                if jmag < PUSH_CREEP_X:
                    jmag = PUSH_CREEP_X
                if jmag > 1.0:
                    jmag = 1.0
            self._joy = direction * jmag

    # -- the per-tick entry point --------------------------------------------

    def act(self, obs: TrialObservation, noise_deg: float = 0.0) -> OperatorAction:
        """One tick of behaviour given the previous tick's observation."""
        if obs.contained:
            self._streak += 1
        else:
            self._streak = 0

        mode = self._mode
        if mode == MODE_WAIT:
            self._button = False
            self._cmd = 0.0
            self._ctrl = 0.0
            self._joy = 0.0
            self._mode_ticks += 1
            if self._mode_ticks >= self._delay_ticks:
                if self._family == "rate" or self._family == "zone":
                    self._enter(MODE_ENGAGE)
                else:
                    self._enter(MODE_NAV)
                    self._nav_phase = D_IDLE
        elif mode == MODE_ENGAGE:
            self._button = True
            self._cmd = 0.0
            if obs.movement_enabled:
                self._enter(MODE_NAV)
                self._nav_phase = R_SETTLE
        elif mode == MODE_NAV:
            if self._family == "rate":
                self._nav_rate(obs)
            elif self._family == "zone":
                self._nav_zone(obs)
            elif self._family == "drag":
                self._nav_drag(obs)
            else:
                self._nav_push(obs)
        elif mode == MODE_RELEASE:
            self._button = False
            self._cmd = 0.0
            self._enter(MODE_SELECT)
        else:  # MODE_SELECT
            self._mode_ticks += 1
            self._joy = 0.0
            self._ctrl = 0.0
            if self._mode_ticks <= self._short_ticks:
                self._button = True
            else:
                self._button = False
                self._enter(MODE_WAIT)

        # Head plant: controller techniques do not move the head at all;
        # head techniques track the command through noise and a rate limit.
        if self._family == "rate" or self._family == "zone":
            target_yaw = self._cmd + noise_deg
            delta = target_yaw - self._yaw
            if delta > self._max_step:
                delta = self._max_step
            elif delta < -self._max_step:
                delta = -self._max_step
            self._yaw = self._yaw + delta
        ctrl_raw = self._ctrl * self.technique_params.drag.full_scale_deg_s
        return OperatorAction(self._yaw, ctrl_raw, self._joy, self._button)
