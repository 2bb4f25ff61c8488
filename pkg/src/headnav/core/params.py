"""Kernel plumbing: everything a tick loop needs, precomputed once.

Both backends consume the same KernelInputs, built here in plain Python.
Anything that is constant across a trial (thresholds in degrees, operator
constants, the noise array) is computed exactly once so the two backends
cannot diverge by recomputing it differently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..geometry import DisplayGeometry
from ..operators import OperatorParams, derived_constants, make_yaw_noise
from ..techniques import ALL_TECHNIQUES, TechniqueParams, technique_family

FAMILY_CODES = {"rate": 0, "zone": 1, "drag": 2, "push": 3}
RATE_CODES = {"linear": 0, "sigmoid": 1, "polynomial": 2, "push_release": 2}
VARIANT_CODES = {"continuous": 0, "friction": 1, "additive": 2, "interrupted": 3}
TECHNIQUE_CODES = {name: i for i, name in enumerate(ALL_TECHNIQUES)}

ZONE_KIND_NAMES = ("stop", "constant", "dynamic", "flick")
DRAG_PHASE_NAMES = ("idle", "dragging", "flicking")
CONTAINMENT_NAMES = ("outside", "partial", "contained")
EVENT_NAMES = ("", "press", "release", "select_success", "select_fail", "timeout")

STRATEGY_CODES = {"greedy_saturate": 0, "proportional": 1}


@dataclass
class KernelInputs:
    """Flattened trial state for the tick loops; see prepare()."""

    # identity / sizing
    technique: str
    family: str
    family_code: int
    rate_code: int
    variant_code: int
    dt: float
    vmax_deg_s: float
    half_range_deg: float
    budget_ticks: int
    long_press_ticks: int
    clock_on_press: bool
    collect_log: bool
    # task geometry
    targets_deg: tuple
    contained_thr_deg: float
    partial_thr_deg: float
    # technique constants
    dead_zone: float
    steepness: float
    offset: float
    exponent: float
    stop_edge: float
    constant_edge: float
    flick_edge: float
    constant_speed: float
    max_time: float
    friction_mu: float
    friction_compounding: bool
    additive_unsigned: bool
    drag_gain: float
    flick_multiplier: float
    flick_damping: float
    full_scale_deg_s: float
    # operator constants (unused in replay mode)
    strategy_code: int
    flick_speed_request: float
    op_delay_ticks: int
    op_short_ticks: int
    op_long_ticks: int
    op_max_step: float
    op_aim_tol: float
    op_stop_deg: float
    op_const_mid: float
    op_dyn_mid: float
    op_dyn_hi: float
    op_flick_rest: float
    op_stroke_ticks: int
    op_prune_drift: float
    op_flick_band: float
    # per-tick arrays
    noise: Optional[np.ndarray]
    replay_yaw: Optional[np.ndarray]
    replay_x: Optional[np.ndarray]
    replay_button: Optional[np.ndarray]
    # original objects, for the reference backend
    operator_params: OperatorParams
    technique_params: TechniqueParams


@dataclass
class RawResult:
    """Backend output before formatting; log arrays are index-parallel."""

    trial_time_s: float
    head_rotation_deg: float
    crossings: int
    additional_attempts: int
    success: bool
    dt: float
    log_count: int = 0
    log_yaw: Optional[list] = None
    log_x: Optional[list] = None
    log_phase: Optional[list] = None
    log_y: Optional[list] = None
    log_workspace: Optional[list] = None
    log_containment: Optional[list] = None
    log_button: Optional[list] = None
    log_event: Optional[list] = None


def _padded(values: np.ndarray, budget: int) -> np.ndarray:
    """Extend to budget ticks by holding the last row (or truncate)."""
    if len(values) >= budget:
        return np.ascontiguousarray(values[:budget])
    index = np.minimum(np.arange(budget), len(values) - 1)
    return np.ascontiguousarray(values[index])


def prepare(cfg, operator_params: OperatorParams, technique_params: TechniqueParams,
            geometry: DisplayGeometry, contained_thr_deg: float, partial_thr_deg: float,
            targets_deg: tuple, replay, collect_log: bool) -> KernelInputs:
    family = technique_family(cfg.mapping)
    budget = cfg.budget_ticks
    rp = technique_params.rate
    zt = technique_params.zones
    dp = technique_params.drag

    consts = derived_constants(
        operator_params, cfg.mapping, technique_params, dt=cfg.dt,
        vmax_deg_s=geometry.max_workspace_speed_deg_s,
        long_press_s=cfg.long_press_ms / 1000.0,
        contained_threshold_deg=contained_thr_deg)

    noise = None
    replay_yaw = replay_x = replay_button = None
    if replay is not None:
        n = len(replay.yaw_deg)
        if n == 0:
            raise ValueError("replay trace is empty")
        yaw = np.asarray(replay.yaw_deg, dtype=np.float64)
        if replay.x_norm is not None:
            x = np.asarray(replay.x_norm, dtype=np.float64)
        elif family == "rate" or family == "zone":
            x = np.clip(yaw / 90.0, -1.0, 1.0)
        elif family == "drag":
            raw = np.asarray(replay.controller_velocity, dtype=np.float64)
            x = np.clip(raw / dp.full_scale_deg_s, -1.0, 1.0)
        else:
            x = np.clip(np.asarray(replay.joystick, dtype=np.float64), -1.0, 1.0)
        button = np.asarray(replay.button, dtype=np.uint8)
        replay_yaw = _padded(yaw, budget)
        replay_x = _padded(x, budget)
        replay_button = _padded(button, budget)
    else:
        noise = make_yaw_noise(operator_params, budget, cfg.seed)

    return KernelInputs(
        technique=cfg.mapping,
        family=family,
        family_code=FAMILY_CODES[family],
        rate_code=RATE_CODES.get(cfg.mapping, 0),
        variant_code=VARIANT_CODES.get(cfg.mapping, 0),
        dt=cfg.dt,
        vmax_deg_s=geometry.max_workspace_speed_deg_s,
        half_range_deg=90.0,
        budget_ticks=budget,
        long_press_ticks=cfg.long_press_ticks,
        clock_on_press=cfg.clock_start == "press",
        collect_log=collect_log,
        targets_deg=tuple(targets_deg),
        contained_thr_deg=contained_thr_deg,
        partial_thr_deg=partial_thr_deg,
        dead_zone=rp.dead_zone,
        steepness=rp.steepness,
        offset=rp.offset,
        exponent=rp.exponent,
        stop_edge=zt.stop_edge,
        constant_edge=zt.constant_edge,
        flick_edge=zt.flick_edge,
        constant_speed=zt.constant_speed,
        max_time=zt.max_time,
        friction_mu=zt.friction_mu,
        friction_compounding=zt.friction_compounding,
        additive_unsigned=zt.additive_unsigned_combine,
        drag_gain=dp.gain,
        flick_multiplier=dp.flick_multiplier,
        flick_damping=dp.flick_damping,
        full_scale_deg_s=dp.full_scale_deg_s,
        strategy_code=STRATEGY_CODES[operator_params.strategy],
        flick_speed_request=operator_params.flick_speed_request,
        op_delay_ticks=consts["delay_ticks"],
        op_short_ticks=consts["short_ticks"],
        op_long_ticks=consts["long_ticks"],
        op_max_step=consts["max_step"],
        op_aim_tol=consts["aim_tol"],
        op_stop_deg=consts["stop_deg"],
        op_const_mid=consts["const_mid"],
        op_dyn_mid=consts["dyn_mid"],
        op_dyn_hi=consts["dyn_hi"],
        op_flick_rest=consts["flick_rest"],
        op_stroke_ticks=consts["stroke_ticks"],
        op_prune_drift=consts["prune_drift"],
        op_flick_band=consts["flick_band"],
        noise=noise,
        replay_yaw=replay_yaw,
        replay_x=replay_x,
        replay_button=replay_button,
        operator_params=operator_params,
        technique_params=technique_params,
    )
