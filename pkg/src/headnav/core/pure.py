"""Reference tick loop in plain Python.

This is the semantics of a trial; the compiled backend is a line-by-line
transliteration and must produce bit-identical results. Keep expressions
here boring and explicit (left-associated products, ternary-style
clamps), because each one is mirrored in C.
"""

from __future__ import annotations

from ..controller import DragFlickState, DragPhase, drag_flick_step, push_release
from ..geometry import normalize_yaw, wrap_signed, wrap_workspace
from ..operators import Operator, TrialObservation
from ..rate import RATE_FUNCTIONS
from ..zones import ZoneKind, ZoneState, ZoneVariant, step_zone
from .params import KernelInputs, RawResult

_ZONE_CODE = {ZoneKind.STOP: 0, ZoneKind.CONSTANT: 1, ZoneKind.DYNAMIC: 2, ZoneKind.FLICK: 3}
_DRAG_CODE = {DragPhase.IDLE: 0, DragPhase.DRAGGING: 1, DragPhase.FLICKING: 2}


def run_kernel(inp: KernelInputs) -> RawResult:
    dt = inp.dt
    vmax = inp.vmax_deg_s
    family = inp.family
    budget = inp.budget_ticks
    long_ticks = inp.long_press_ticks
    targets = inp.targets_deg
    legs = len(targets)
    c_thr = inp.contained_thr_deg
    p_thr = inp.partial_thr_deg
    noise = inp.noise
    replaying = inp.replay_yaw is not None

    op = None
    if not replaying:
        op = Operator(inp.operator_params, inp.technique, inp.technique_params,
                      dt=dt, vmax_deg_s=vmax,
                      long_press_s=long_ticks * dt,
                      contained_threshold_deg=c_thr,
                      half_range_deg=inp.half_range_deg)

    rate_fn = RATE_FUNCTIONS.get(inp.technique)
    rate_params = inp.technique_params.rate
    zone_thresholds = inp.technique_params.zones
    drag_params = inp.technique_params.drag
    zone_state = ZoneState.initial(ZoneVariant(inp.technique)) if family == "zone" else None
    drag_state = DragFlickState() if family == "drag" else None

    workspace = 0.0
    leg = 0
    target = targets[0]
    err = wrap_signed(target - workspace)
    mag = err if err >= 0.0 else -err
    contain = 2 if mag <= c_thr else (1 if mag < p_thr else 0)
    prev_cross = -1  # sentinel: the first containment counts as an entry
    button_prev = False
    enabled_prev = False
    press_tick = -1
    clock_started = False
    clock_tick = 0
    yaw_prev = 0.0
    y_prev = 0.0
    head_rot = 0.0
    crossings = 0
    attempts = 0
    success = False
    end_tick = budget

    collect = inp.collect_log
    log_yaw = [] if collect else None
    log_x = [] if collect else None
    log_phase = [] if collect else None
    log_y = [] if collect else None
    log_workspace = [] if collect else None
    log_containment = [] if collect else None
    log_button = [] if collect else None
    log_event = [] if collect else None

    for k in range(budget):
        # 1. act on the previous tick's state
        if replaying:
            yaw = float(inp.replay_yaw[k])
            x = float(inp.replay_x[k])
            button = inp.replay_button[k] != 0
        else:
            obs = TrialObservation(err, contain == 2, enabled_prev, y_prev,
                                   zone_state, drag_state)
            n = float(noise[k]) if noise is not None else 0.0
            action = op.act(obs, n)
            yaw = action.yaw_deg
            button = action.button_down
            if family == "rate" or family == "zone":
                x = normalize_yaw(yaw, inp.half_range_deg)
            elif family == "drag":
                x = action.controller_velocity_deg_s / inp.full_scale_deg_s
                if x > 1.0:
                    x = 1.0
                elif x < -1.0:
                    x = -1.0
            else:
                x = action.joystick
                if x > 1.0:
                    x = 1.0
                elif x < -1.0:
                    x = -1.0

        # 2. press edge and the trial clock
        pressed_edge = button and not button_prev
        if pressed_edge:
            press_tick = k
        if not clock_started and inp.clock_on_press:
            if pressed_edge or (family == "push" and (x > inp.dead_zone or x < -inp.dead_zone)):
                clock_started = True
                clock_tick = k

        # 3. movement gate: head techniques need an active long press
        if family == "rate" or family == "zone":
            enabled = button and press_tick >= 0 and (k - press_tick) > long_ticks
        else:
            enabled = True

        # 4. technique step
        if family == "rate":
            y = rate_fn(x, rate_params) if enabled else 0.0
        elif family == "zone":
            if enabled:
                zone_state, y = step_zone(zone_state, x, dt, zone_thresholds)
            else:
                y = 0.0
        elif family == "drag":
            drag_state, y = drag_flick_step(drag_state, x, button, dt, drag_params)
        else:
            y = push_release(x, rate_params)
        if y > 1.0:
            y = 1.0
        elif y < -1.0:
            y = -1.0

        # 5. integrate and wrap
        workspace = wrap_workspace(workspace + y * vmax * dt)
        if not clock_started and not inp.clock_on_press and y != 0.0:
            clock_started = True
            clock_tick = k

        # 6. evaluate the new state
        err = wrap_signed(target - workspace)
        mag = err if err >= 0.0 else -err
        contain = 2 if mag <= c_thr else (1 if mag < p_thr else 0)
        if contain == 2 and prev_cross != 2:
            crossings += 1
        prev_cross = contain
        if k == 0:
            yaw_prev = yaw
        dyaw = yaw - yaw_prev
        head_rot += dyaw if dyaw >= 0.0 else -dyaw
        yaw_prev = yaw

        # 7. release protocol
        event = 1 if pressed_edge else 0
        if button_prev and not button:
            duration = k - press_tick
            if duration < long_ticks:
                if contain == 2:
                    event = 3
                    if leg + 1 < legs:
                        leg += 1
                        target = targets[leg]
                        err = wrap_signed(target - workspace)
                        mag = err if err >= 0.0 else -err
                        contain = 2 if mag <= c_thr else (1 if mag < p_thr else 0)
                        prev_cross = -1
                    else:
                        success = True
                        end_tick = k
                else:
                    attempts += 1
                    event = 4
            else:
                event = 2
            press_tick = -1

        # 8. log and roll state forward
        if collect:
            log_yaw.append(yaw)
            log_x.append(x)
            if family == "zone":
                log_phase.append(_ZONE_CODE[zone_state.kind])
            elif family == "drag":
                log_phase.append(_DRAG_CODE[drag_state.phase])
            else:
                log_phase.append(-1)
            log_y.append(y)
            log_workspace.append(workspace)
            log_containment.append(contain)
            log_button.append(1 if button else 0)
            log_event.append(event)
        button_prev = button
        enabled_prev = enabled
        y_prev = y
        if success:
            break

    if not success and collect and log_event:
        log_event[-1] = 5
    trial_time = (end_tick - clock_tick) * dt

    return RawResult(
        trial_time_s=trial_time,
        head_rotation_deg=head_rot,
        crossings=crossings,
        additional_attempts=attempts,
        success=success,
        dt=dt,
        log_count=len(log_yaw) if collect else 0,
        log_yaw=log_yaw,
        log_x=log_x,
        log_phase=log_phase,
        log_y=log_y,
        log_workspace=log_workspace,
        log_containment=log_containment,
        log_button=log_button,
        log_event=log_event,
    )
