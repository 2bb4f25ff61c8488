# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of core.pure: the same tick loop as one C function.

Every expression here mirrors core/pure.py (and the Operator in
operators.py) operation for operation: same literals, same association,
same branch structure. The build disables FP contraction so both backends
produce bit-identical trajectories. Change the reference first, then
re-transliterate here; test_backend_parity holds the two together.
"""

import numpy as np

from libc.math cimport exp, fabs, floor, pow

from .params import RawResult

# Keep in sync with the module constants in operators.py.
cdef double FINE_BAND_DEG = 25.0
cdef double FLICK_WORTH_DEG = 60.0
cdef double RESTROKE_SPEED = 0.85
cdef double FINE_DRAG_X = 0.15
cdef double PUSH_SLOW_BAND_DEG = 5.0
cdef double PUSH_CREEP_X = 0.35
cdef double PROP_GAIN_DEG_PER_DEG = 1.0
cdef double PROP_FLICK_FLOOR = 0.25
cdef double PROP_DRAG_FLOOR = 0.2
cdef int SELECT_STREAK_TICKS = 2


cdef struct ZoneSt:
    int kind        # 0 stop, 1 constant, 2 dynamic, 3 flick
    double dwell
    double decay
    double held
    bint pending


cdef struct ZP:
    double stop_edge
    double const_edge
    double flick_edge
    double c_speed
    double max_time
    double mu
    bint compounding
    bint unsigned_combine
    int variant     # 0 continuous, 1 friction, 2 additive, 3 interrupted


cdef struct DragSt:
    int phase       # 0 idle, 1 dragging, 2 flicking
    double release_v
    double since


cdef double _wrap_workspace(double a) noexcept:
    cdef double w = a - 360.0 * floor(a / 360.0)
    if w >= 360.0:
        w -= 360.0
    if w < 0.0:
        w += 360.0
    return w


cdef double _wrap_signed(double d) noexcept:
    cdef double w = d - 360.0 * floor((d + 180.0) / 360.0)
    if w < -180.0:
        w += 360.0
    if w >= 180.0:
        w -= 360.0
    return w


cdef double _rate_y(int code, double x, double dz, double steep, double off,
                    double expo) noexcept:
    cdef double mag
    if code == 0:
        if fabs(x) <= dz:
            return 0.0
        return x
    if code == 1:
        if x > dz:
            return 1.0 / (1.0 + exp(-x * steep + off))
        if x < -dz:
            return -1.0 / (1.0 + exp(x * steep + off))
        return 0.0
    if fabs(x) <= dz:
        return 0.0
    mag = pow(fabs(x), expo)
    return mag if x > 0.0 else -mag


cdef double _zone_step(ZoneSt* s, double x, double dt, ZP* p) noexcept:
    cdef double magnitude = fabs(x)
    cdef int kind
    cdef int side = 1 if x > 0.0 else -1
    cdef int previous = s.kind
    cdef double y, dwell, decay, held, speed, combined, tmp
    cdef bint pending
    if magnitude <= p.stop_edge:
        s.kind = 0
        s.dwell = 0.0
        s.decay = 0.0
        s.held = 0.0
        s.pending = False
        return 0.0
    if magnitude <= p.const_edge:
        s.kind = 1
        return p.c_speed if side > 0 else -p.c_speed
    if magnitude <= p.flick_edge:
        dwell = s.dwell
        decay = s.decay
        held = s.held
        pending = s.pending
        if previous != 2:
            dwell = 0.0
            if pending:
                decay = 0.0
                pending = False
        dwell = dwell + dt
        decay = decay + dt
        if p.variant == 0 or p.variant == 2:
            y = held
        elif p.variant == 3:
            held = 0.0
            y = 0.0
        else:
            tmp = fabs(held) - p.mu * decay
            if tmp < 0.0:
                tmp = 0.0
            y = tmp if held > 0.0 else (-tmp if held < 0.0 else 0.0)
            if p.compounding:
                held = y
        s.kind = 2
        s.dwell = dwell
        s.decay = decay
        s.held = held
        s.pending = pending
        return y
    # flick band
    held = s.held
    pending = s.pending
    if previous != 3:
        dwell = s.dwell if previous == 2 else p.max_time
        tmp = p.max_time - dwell
        if tmp < 0.0:
            tmp = 0.0
        speed = tmp / p.max_time
        if p.variant == 2:
            if p.unsigned_combine:
                combined = fabs(held + speed)
            else:
                combined = fabs(held + (speed if side > 0 else -speed))
            if combined > 1.0:
                combined = 1.0
            held = combined if side > 0 else -combined
        else:
            held = speed if side > 0 else -speed
        pending = True
    s.kind = 3
    s.held = held
    s.pending = pending
    return held


cdef double _drag_step(DragSt* s, double x, bint button, double dt, double gain,
                       double mf, double df) noexcept:
    cdef double y, since, magnitude
    if button:
        y = gain * x
        if y > 1.0:
            y = 1.0
        elif y < -1.0:
            y = -1.0
        s.phase = 1
        s.release_v = 0.0
        s.since = 0.0
        return y
    if s.phase == 1:
        if x == 0.0:
            s.phase = 0
            s.release_v = 0.0
            s.since = 0.0
            return 0.0
        s.phase = 2
        s.release_v = x
        s.since = 0.0
    if s.phase == 2:
        since = s.since + dt
        magnitude = fabs(mf * s.release_v) - df * since
        if magnitude <= 0.0:
            s.phase = 0
            s.release_v = 0.0
            s.since = 0.0
            return 0.0
        if magnitude > 1.0:
            magnitude = 1.0
        y = magnitude if s.release_v > 0.0 else -magnitude
        s.since = since
        return y
    s.phase = 0
    s.release_v = 0.0
    s.since = 0.0
    return 0.0


cdef double _step_toward(double value, double target, double step) noexcept:
    cdef double advanced
    if target > value:
        advanced = value + step
        return target if advanced > target else advanced
    if target < value:
        advanced = value - step
        return target if advanced < target else advanced
    return value


cdef double _rate_brake_drift(double cmd, int code, double dz, double steep,
                              double off, double expo, double half,
                              double max_step, double stop_deg, double vmax,
                              double dt) noexcept:
    cdef double drift = 0.0
    cdef double yaw = fabs(cmd)
    cdef double y
    while yaw > stop_deg:
        yaw = yaw - max_step
        if yaw < 0.0:
            yaw = 0.0
        y = _rate_y(code, yaw / half, dz, steep, off, expo)
        drift += fabs(y) * vmax * dt
    return drift


cdef double _zone_return_drift(double held, ZP* p, double start_deg,
                               double stop_deg, double half, double max_step,
                               double vmax, double dt) noexcept:
    cdef ZoneSt st
    st.kind = 3
    st.dwell = 0.0
    st.decay = 0.0
    st.held = fabs(held)
    st.pending = True
    cdef double drift = 0.0
    cdef double yaw = fabs(start_deg)
    cdef double y
    while yaw > stop_deg:
        yaw = yaw - max_step
        if yaw < 0.0:
            yaw = 0.0
        y = _zone_step(&st, yaw / half, dt, p)
        drift += fabs(y) * vmax * dt
    return drift


cdef double _creep_back_drift(double cmd, double c_speed, double stop_deg,
                              double max_step, double vmax, double dt) noexcept:
    cdef double drift = 0.0
    cdef double yaw = fabs(cmd)
    while yaw > stop_deg:
        yaw = yaw - max_step
        if yaw > stop_deg:
            drift += c_speed * vmax * dt
    return drift


cdef int _ticks_to_cross(double yaw_abs, double dyn_hi, double max_step) noexcept:
    cdef int ticks = 0
    cdef double c = yaw_abs
    while c <= dyn_hi:
        c = c + max_step
        ticks += 1
    return ticks


def run_kernel(inp):
    # unpack once; the loop below touches no Python objects
    cdef double dt = inp.dt
    cdef double vmax = inp.vmax_deg_s
    cdef double half = inp.half_range_deg
    cdef int fam = inp.family_code
    cdef int rate_code = inp.rate_code
    cdef int budget = inp.budget_ticks
    cdef int long_ticks = inp.long_press_ticks
    cdef bint clock_on_press = inp.clock_on_press
    cdef bint collect = inp.collect_log
    cdef double c_thr = inp.contained_thr_deg
    cdef double p_thr = inp.partial_thr_deg
    cdef double dz = inp.dead_zone
    cdef double steep = inp.steepness
    cdef double off = inp.offset
    cdef double expo = inp.exponent
    cdef double drag_gain = inp.drag_gain
    cdef double flick_mult = inp.flick_multiplier
    cdef double flick_damp = inp.flick_damping
    cdef double full_scale = inp.full_scale_deg_s

    cdef ZP zp
    zp.stop_edge = inp.stop_edge
    zp.const_edge = inp.constant_edge
    zp.flick_edge = inp.flick_edge
    zp.c_speed = inp.constant_speed
    zp.max_time = inp.max_time
    zp.mu = inp.friction_mu
    zp.compounding = inp.friction_compounding
    zp.unsigned_combine = inp.additive_unsigned
    zp.variant = inp.variant_code

    # operator constants
    cdef bint greedy = inp.strategy_code == 0
    cdef double flick_speed_request = inp.flick_speed_request
    cdef int delay_ticks = inp.op_delay_ticks
    cdef int short_ticks = inp.op_short_ticks
    cdef int op_long_ticks = inp.op_long_ticks
    cdef double max_step = inp.op_max_step
    cdef double aim_tol = inp.op_aim_tol
    cdef double stop_deg = inp.op_stop_deg
    cdef double const_mid = inp.op_const_mid
    cdef double dyn_mid = inp.op_dyn_mid
    cdef double dyn_hi = inp.op_dyn_hi
    cdef double flick_rest = inp.op_flick_rest
    cdef int stroke_ticks = inp.op_stroke_ticks
    cdef double prune_drift = inp.op_prune_drift
    cdef double flick_band = inp.op_flick_band

    targets_arr = np.asarray(inp.targets_deg, dtype=np.float64)
    cdef double[::1] targets = targets_arr
    cdef int legs = targets_arr.shape[0]

    cdef bint replaying = inp.replay_yaw is not None
    cdef bint has_noise = inp.noise is not None
    cdef double[::1] noise = inp.noise if has_noise else np.zeros(1)
    cdef double[::1] r_yaw = inp.replay_yaw if replaying else np.zeros(1)
    cdef double[::1] r_x = inp.replay_x if replaying else np.zeros(1)
    cdef unsigned char[::1] r_button = inp.replay_button if replaying \
        else np.zeros(1, dtype=np.uint8)

    cdef int alloc = budget if collect else 1
    lv_yaw_arr = np.empty(alloc, dtype=np.float64)
    lv_x_arr = np.empty(alloc, dtype=np.float64)
    lv_phase_arr = np.empty(alloc, dtype=np.int32)
    lv_y_arr = np.empty(alloc, dtype=np.float64)
    lv_workspace_arr = np.empty(alloc, dtype=np.float64)
    lv_contain_arr = np.empty(alloc, dtype=np.int32)
    lv_button_arr = np.empty(alloc, dtype=np.int32)
    lv_event_arr = np.empty(alloc, dtype=np.int32)
    cdef double[::1] lv_yaw = lv_yaw_arr
    cdef double[::1] lv_x = lv_x_arr
    cdef int[::1] lv_phase = lv_phase_arr
    cdef double[::1] lv_y = lv_y_arr
    cdef double[::1] lv_workspace = lv_workspace_arr
    cdef int[::1] lv_contain = lv_contain_arr
    cdef int[::1] lv_button = lv_button_arr
    cdef int[::1] lv_event = lv_event_arr

    # technique state
    cdef ZoneSt zst
    zst.kind = 0
    zst.dwell = 0.0
    zst.decay = 0.0
    zst.held = 0.0
    zst.pending = False
    cdef DragSt dst
    dst.phase = 0
    dst.release_v = 0.0
    dst.since = 0.0

    # operator state (mirrors Operator.reset)
    cdef int op_mode = 0
    cdef int op_mode_ticks = 0
    cdef int op_nav = 0
    cdef double op_cmd = 0.0
    cdef double op_yaw = 0.0
    cdef double op_ctrl = 0.0
    cdef double op_joy = 0.0
    cdef bint op_button = False
    cdef int op_press_ticks = 0
    cdef int op_streak = 0
    cdef double op_dir = 1.0
    cdef double op_coast_drift = 0.0
    cdef double op_dwell_need = 0.0
    cdef bint op_stroke_flick = False

    # trial state
    cdef double workspace = 0.0
    cdef int leg = 0
    cdef double target = targets[0]
    cdef double err = _wrap_signed(target - workspace)
    cdef double mag = err if err >= 0.0 else -err
    cdef int contain = 2 if mag <= c_thr else (1 if mag < p_thr else 0)
    cdef int prev_cross = -1
    cdef bint button_prev = False
    cdef bint enabled_prev = False
    cdef int press_tick = -1
    cdef bint clock_started = False
    cdef int clock_tick = 0
    cdef double yaw_prev = 0.0
    cdef double y_prev = 0.0
    cdef double head_rot = 0.0
    cdef int crossings = 0
    cdef int attempts = 0
    cdef bint success = False
    cdef int end_tick = budget
    cdef int logged = 0

    cdef int k, mode, phase, duration, event
    cdef bint button, pressed_edge, enabled, obs_contained, obs_enabled
    cdef bint hold, drag_idle
    cdef double yaw, x, y, noise_k, obs_err, obs_y, e, nav_mag, direction, cand
    cdef double drift_now, drift_cand, reach, v_req, transit, target_cmd, back
    cdef double xmag, jmag, speed, coast_left, target_yaw_plant, delta
    cdef double ctrl_raw, dyaw

    for k in range(budget):
        # 1. act on the previous tick's state
        if replaying:
            yaw = r_yaw[k]
            x = r_x[k]
            button = r_button[k] != 0
        else:
            obs_err = err
            obs_contained = contain == 2
            obs_enabled = enabled_prev
            obs_y = y_prev
            noise_k = noise[k] if has_noise else 0.0

            if obs_contained:
                op_streak += 1
            else:
                op_streak = 0
            mode = op_mode
            if mode == 0:  # wait
                op_button = False
                op_cmd = 0.0
                op_ctrl = 0.0
                op_joy = 0.0
                op_mode_ticks += 1
                if op_mode_ticks >= delay_ticks:
                    if fam <= 1:
                        op_mode = 1
                        op_mode_ticks = 0
                    else:
                        op_mode = 2
                        op_mode_ticks = 0
                        op_nav = 0
            elif mode == 1:  # engage: press and wait for the long-press gate
                op_button = True
                op_cmd = 0.0
                if obs_enabled:
                    op_mode = 2
                    op_mode_ticks = 0
                    op_nav = 0
            elif mode == 2:  # navigate, by family
                if fam == 0:  # rate
                    op_button = True
                    e = obs_err
                    nav_mag = fabs(e)
                    phase = op_nav
                    if phase == 0:  # settle
                        op_cmd = 0.0
                        if obs_contained:
                            if op_streak >= SELECT_STREAK_TICKS:
                                op_mode = 3
                                op_mode_ticks = 0
                        elif nav_mag > aim_tol:
                            op_nav = 1
                    elif phase == 1:  # approach
                        direction = 1.0 if e > 0.0 else -1.0
                        if nav_mag <= aim_tol:
                            op_nav = 2
                        elif greedy:
                            cand = _step_toward(op_cmd, direction * half, max_step)
                            if nav_mag > prune_drift:
                                op_cmd = cand
                            else:
                                drift_now = _rate_brake_drift(
                                    op_cmd, rate_code, dz, steep, off, expo,
                                    half, max_step, stop_deg, vmax, dt)
                                if drift_now + aim_tol >= nav_mag:
                                    op_nav = 2
                                else:
                                    drift_cand = _rate_brake_drift(
                                        cand, rate_code, dz, steep, off, expo,
                                        half, max_step, stop_deg, vmax, dt)
                                    if drift_cand + aim_tol < nav_mag:
                                        op_cmd = cand
                        else:
                            reach = stop_deg + PROP_GAIN_DEG_PER_DEG * nav_mag
                            if reach > half:
                                reach = half
                            op_cmd = _step_toward(op_cmd, direction * reach, max_step)
                    else:  # brake
                        op_cmd = _step_toward(op_cmd, 0.0, max_step)
                        if op_cmd == 0.0:
                            op_nav = 0
                elif fam == 1:  # zone
                    op_button = True
                    e = obs_err
                    nav_mag = fabs(e)
                    phase = op_nav
                    if phase == 0:  # settle / decide
                        op_cmd = 0.0
                        if obs_contained:
                            if op_streak >= SELECT_STREAK_TICKS:
                                op_mode = 3
                                op_mode_ticks = 0
                        elif nav_mag > aim_tol:
                            op_dir = 1.0 if e > 0.0 else -1.0
                            if nav_mag >= flick_band:
                                if greedy:
                                    v_req = flick_speed_request
                                else:
                                    v_req = nav_mag / 180.0
                                    if v_req < PROP_FLICK_FLOOR:
                                        v_req = PROP_FLICK_FLOOR
                                    if v_req > 1.0:
                                        v_req = 1.0
                                op_dwell_need = zp.max_time * (1.0 - v_req)
                                op_nav = 1
                            else:
                                op_nav = 4
                    elif phase == 1:  # ramp out, burning the planned dwell
                        hold = False
                        if op_dwell_need > 0.0 and zst.kind == 2:
                            transit = _ticks_to_cross(fabs(op_cmd), dyn_hi, max_step) * dt
                            if zst.dwell + transit < op_dwell_need:
                                hold = True
                        target_cmd = op_dir * (dyn_mid if hold else flick_rest)
                        op_cmd = _step_toward(op_cmd, target_cmd, max_step)
                        if zst.kind == 3:
                            op_coast_drift = _zone_return_drift(
                                zst.held, &zp, op_cmd, stop_deg, half,
                                max_step, vmax, dt)
                            op_nav = 2
                    elif phase == 2:  # coast at the flick rest
                        op_cmd = op_dir * flick_rest
                        if nav_mag <= op_coast_drift + aim_tol:
                            op_nav = 3
                    elif phase == 3:  # return
                        op_cmd = _step_toward(op_cmd, 0.0, max_step)
                        if op_cmd == 0.0:
                            op_nav = 0
                    elif phase == 4:  # creep in the constant band
                        op_cmd = _step_toward(op_cmd, op_dir * const_mid, max_step)
                        back = _creep_back_drift(op_cmd, zp.c_speed, stop_deg,
                                                 max_step, vmax, dt)
                        if nav_mag <= back + aim_tol or e * op_dir < 0.0:
                            op_nav = 5
                    else:  # creep back
                        op_cmd = _step_toward(op_cmd, 0.0, max_step)
                        if op_cmd == 0.0:
                            op_nav = 0
                elif fam == 2:  # drag
                    e = obs_err
                    nav_mag = fabs(e)
                    phase = op_nav
                    drag_idle = dst.phase == 0
                    if phase == 0:  # idle / decide
                        op_button = False
                        op_ctrl = 0.0
                        if obs_contained:
                            if op_streak >= SELECT_STREAK_TICKS and drag_idle:
                                op_mode = 4
                                op_mode_ticks = 0
                        elif nav_mag > aim_tol:
                            op_dir = 1.0 if e > 0.0 else -1.0
                            op_press_ticks = 0
                            op_stroke_flick = greedy and nav_mag >= FLICK_WORTH_DEG
                            op_nav = 1
                    elif phase == 1:  # stroke
                        op_button = True
                        op_press_ticks += 1
                        if nav_mag <= aim_tol:
                            op_ctrl = 0.0
                            op_nav = 2
                        else:
                            if greedy:
                                xmag = 1.0 if nav_mag > FINE_BAND_DEG else FINE_DRAG_X
                            else:
                                xmag = PROP_DRAG_FLOOR + nav_mag / half
                                if xmag > 1.0:
                                    xmag = 1.0
                            op_ctrl = op_dir * xmag
                            if op_stroke_flick and op_press_ticks >= stroke_ticks:
                                op_button = False  # release mid-motion: the flick
                                op_nav = 3
                    elif phase == 2:  # stroke end: hold past the long-press bar
                        op_button = True
                        op_ctrl = 0.0
                        op_press_ticks += 1
                        if op_press_ticks > op_long_ticks + 1:
                            op_button = False
                            op_nav = 0
                    elif phase == 3:  # coast
                        op_button = False
                        op_ctrl = 0.0
                        speed = fabs(obs_y)
                        if nav_mag <= aim_tol:
                            op_press_ticks = 0
                            op_nav = 4
                        elif speed <= RESTROKE_SPEED:
                            coast_left = speed * speed * vmax / (2.0 * flick_damp)
                            if coast_left < nav_mag - aim_tol and nav_mag > FINE_BAND_DEG:
                                op_press_ticks = 0
                                op_stroke_flick = greedy and nav_mag >= FLICK_WORTH_DEG
                                op_nav = 1
                            elif drag_idle:
                                op_nav = 0
                        elif drag_idle:
                            op_nav = 0
                    else:  # stop press: cancel the coast
                        op_button = True
                        op_ctrl = 0.0
                        op_press_ticks += 1
                        if op_press_ticks > op_long_ticks + 1:
                            op_button = False
                            op_nav = 0
                else:  # push
                    op_button = False
                    e = obs_err
                    nav_mag = fabs(e)
                    if obs_contained and op_streak >= SELECT_STREAK_TICKS and op_joy == 0.0:
                        op_mode = 4
                        op_mode_ticks = 0
                    else:
                        if nav_mag <= aim_tol:
                            op_joy = 0.0
                        else:
                            direction = 1.0 if e > 0.0 else -1.0
                            if greedy:
                                jmag = 1.0 if nav_mag > PUSH_SLOW_BAND_DEG else PUSH_CREEP_X
                            else:
                                jmag = nav_mag / half
                                if jmag < PUSH_CREEP_X:
                                    jmag = PUSH_CREEP_X
                                if jmag > 1.0:
                                    jmag = 1.0
                            op_joy = direction * jmag
            elif mode == 3:  # release the long press
                op_button = False
                op_cmd = 0.0
                op_mode = 4
                op_mode_ticks = 0
            else:  # select: short press, then wait out the next reaction
                op_mode_ticks += 1
                op_joy = 0.0
                op_ctrl = 0.0
                if op_mode_ticks <= short_ticks:
                    op_button = True
                else:
                    op_button = False
                    op_mode = 0
                    op_mode_ticks = 0

            # head plant (head techniques only; controllers keep yaw at 0)
            if fam <= 1:
                target_yaw_plant = op_cmd + noise_k
                delta = target_yaw_plant - op_yaw
                if delta > max_step:
                    delta = max_step
                elif delta < -max_step:
                    delta = -max_step
                op_yaw = op_yaw + delta
            yaw = op_yaw
            button = op_button
            if fam <= 1:
                x = yaw / half
                if x > 1.0:
                    x = 1.0
                elif x < -1.0:
                    x = -1.0
            elif fam == 2:
                ctrl_raw = op_ctrl * full_scale
                x = ctrl_raw / full_scale
                if x > 1.0:
                    x = 1.0
                elif x < -1.0:
                    x = -1.0
            else:
                x = op_joy
                if x > 1.0:
                    x = 1.0
                elif x < -1.0:
                    x = -1.0

        # 2. press edge and the trial clock
        pressed_edge = button and not button_prev
        if pressed_edge:
            press_tick = k
        if not clock_started and clock_on_press:
            if pressed_edge or (fam == 3 and (x > dz or x < -dz)):
                clock_started = True
                clock_tick = k

        # 3. movement gate
        if fam <= 1:
            enabled = button and press_tick >= 0 and (k - press_tick) > long_ticks
        else:
            enabled = True

        # 4. technique step
        if fam == 0:
            y = _rate_y(rate_code, x, dz, steep, off, expo) if enabled else 0.0
        elif fam == 1:
            y = _zone_step(&zst, x, dt, &zp) if enabled else 0.0
        elif fam == 2:
            y = _drag_step(&dst, x, button, dt, drag_gain, flick_mult, flick_damp)
        else:
            y = _rate_y(2, x, dz, steep, off, expo)
        if y > 1.0:
            y = 1.0
        elif y < -1.0:
            y = -1.0

        # 5. integrate and wrap
        workspace = _wrap_workspace(workspace + y * vmax * dt)
        if not clock_started and not clock_on_press and y != 0.0:
            clock_started = True
            clock_tick = k

        # 6. evaluate the new state
        err = _wrap_signed(target - workspace)
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
                        err = _wrap_signed(target - workspace)
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
            lv_yaw[k] = yaw
            lv_x[k] = x
            if fam == 1:
                lv_phase[k] = zst.kind
            elif fam == 2:
                lv_phase[k] = dst.phase
            else:
                lv_phase[k] = -1
            lv_y[k] = y
            lv_workspace[k] = workspace
            lv_contain[k] = contain
            lv_button[k] = 1 if button else 0
            lv_event[k] = event
            logged = k + 1
        button_prev = button
        enabled_prev = enabled
        y_prev = y
        if success:
            break

    if not success and collect and logged > 0:
        lv_event[logged - 1] = 5
    cdef double trial_time = (end_tick - clock_tick) * dt

    return RawResult(
        trial_time_s=trial_time,
        head_rotation_deg=head_rot,
        crossings=crossings,
        additional_attempts=attempts,
        success=success,
        dt=dt,
        log_count=logged if collect else 0,
        log_yaw=lv_yaw_arr[:logged] if collect else None,
        log_x=lv_x_arr[:logged] if collect else None,
        log_phase=lv_phase_arr[:logged] if collect else None,
        log_y=lv_y_arr[:logged] if collect else None,
        log_workspace=lv_workspace_arr[:logged] if collect else None,
        log_containment=lv_contain_arr[:logged] if collect else None,
        log_button=lv_button_arr[:logged] if collect else None,
        log_event=lv_event_arr[:logged] if collect else None,
    )
