import math
import random

import pytest

from headnav.zones import (ZoneKind, ZoneState, ZoneThresholds, ZoneVariant,
                           classify, flick_speed, step_zone)

T = ZoneThresholds()
DT = 1.0 / 120.0


def advance(state, xs, thresholds=T):
    ys = []
    for x in xs:
        state, y = step_zone(state, x, DT, thresholds)
        ys.append(y)
    return state, ys


def test_classify_boundaries_go_inward():
    assert classify(0.0, T).kind is ZoneKind.STOP
    assert classify(0.11, T).kind is ZoneKind.STOP
    assert classify(-0.11, T).kind is ZoneKind.STOP
    assert classify(math.nextafter(0.11, 1.0), T).kind is ZoneKind.CONSTANT
    assert classify(0.22, T).kind is ZoneKind.CONSTANT
    assert classify(math.nextafter(0.22, 1.0), T).kind is ZoneKind.DYNAMIC
    assert classify(0.44, T).kind is ZoneKind.DYNAMIC
    assert classify(math.nextafter(0.44, 1.0), T).kind is ZoneKind.FLICK
    assert classify(1.0, T).kind is ZoneKind.FLICK
    assert classify(-1.0, T).kind is ZoneKind.FLICK


def test_classify_sides():
    assert classify(0.0, T).side == 0
    assert classify(0.05, T).side == 0
    assert classify(0.3, T).side == 1
    assert classify(-0.3, T).side == -1


def test_classify_rejects_out_of_range():
    with pytest.raises(ValueError):
        classify(1.1, T)
    with pytest.raises(ValueError):
        classify(math.nan, T)


def test_classify_total_partition():
    # Every point of a dense scan lands in exactly one zone.
    n = 10_000
    for i in range(n + 1):
        x = -1.0 + 2.0 * i / n
        kind = classify(x, T).kind
        mag = abs(x)
        if mag <= 0.11:
            assert kind is ZoneKind.STOP
        elif mag <= 0.22:
            assert kind is ZoneKind.CONSTANT
        elif mag <= 0.44:
            assert kind is ZoneKind.DYNAMIC
        else:
            assert kind is ZoneKind.FLICK


def test_flick_speed_law():
    assert flick_speed(0.0, T) == 1.0
    assert flick_speed(2.0, T) == 0.0
    assert flick_speed(2.5, T) == 0.0
    assert flick_speed(1.0, T) == 0.5
    assert flick_speed(0.2, T) == pytest.approx(0.9, abs=1e-15)
    with pytest.raises(ValueError):
        flick_speed(-0.1, T)
    with pytest.raises(ValueError):
        flick_speed(math.nan, T)


def test_stop_zone_clears_memory():
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, _ = advance(state, [0.3] * 10 + [0.6])   # flick
    assert state.held_velocity != 0.0
    state, ys = advance(state, [0.0])
    assert ys == [0.0]
    assert state.held_velocity == 0.0
    assert state.dwell_s == 0.0
    assert state.decay_s == 0.0
    # back in the dynamic zone nothing resumes
    state, ys = advance(state, [0.3] * 5)
    assert ys == [0.0] * 5


def test_constant_zone_fixed_speed_and_passthrough():
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, ys = advance(state, [0.15, 0.2, -0.15])
    assert ys == [0.10, 0.10, -0.10]
    # passing through the constant band preserves the held velocity
    state, _ = advance(state, [0.3] * 10 + [0.6])
    held = state.held_velocity
    state, _ = advance(state, [0.15, 0.15])
    assert state.held_velocity == held


def test_dynamic_dwell_sets_flick_speed():
    # 24 ticks of dynamic dwell = 0.2 s -> flick speed (2 - 0.2)/2 = 0.9
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, _ = advance(state, [0.3] * 24)
    state, ys = advance(state, [0.6])
    assert ys[0] == pytest.approx(0.9, abs=1e-12)
    assert state.held_velocity == ys[0]


def test_flick_direction_follows_input_side():
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, _ = advance(state, [-0.3] * 24)
    state, ys = advance(state, [-0.6])
    assert ys[0] == pytest.approx(-0.9, abs=1e-12)


def test_flick_without_dynamic_transit_is_dead():
    # Jumping straight from stop into the flick band dwells "forever":
    # the launch speed is the max_time value, zero.
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, ys = advance(state, [0.6])
    assert ys == [0.0]
    assert state.held_velocity == 0.0


def test_staying_in_flick_does_not_retrigger():
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, _ = advance(state, [0.3] * 24)
    state, ys = advance(state, [0.6, 0.8, 1.0, 0.5])
    assert ys == [ys[0]] * 4


def test_continuous_holds_bit_exact():
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    state, _ = advance(state, [0.3] * 36 + [0.6])
    held = state.held_velocity
    state, ys = advance(state, [0.3] * 200)
    assert all(y == held for y in ys)


def test_interrupted_zeroes_dynamic():
    state = ZoneState.initial(ZoneVariant.INTERRUPTED)
    state, _ = advance(state, [0.3] * 24 + [0.6])
    assert state.held_velocity != 0.0
    state, ys = advance(state, [0.3] * 50)
    assert ys == [0.0] * 50
    assert state.held_velocity == 0.0


def test_friction_closed_form_decay():
    # Inject a held velocity and decay it: y_k = max(0, y0 - mu*k*dt).
    y0 = 0.6
    state = ZoneState(variant=ZoneVariant.FRICTION, kind=ZoneKind.FLICK,
                      held_velocity=y0, flick_pending_reset=True)
    ticks = 0
    while True:
        state, y = step_zone(state, 0.3, DT, T)
        ticks += 1
        expected = max(0.0, y0 - T.friction_mu * ticks * DT)
        assert y == pytest.approx(expected, abs=1e-12)
        if y == 0.0:
            break
        assert ticks < 3000
    # |y0| / mu = 20 s, within one tick
    assert abs(ticks * DT - y0 / T.friction_mu) <= DT + 1e-12


def test_friction_decay_clock_resets_after_each_flick():
    state = ZoneState.initial(ZoneVariant.FRICTION)
    state, _ = advance(state, [0.3] * 24 + [0.6])
    state, ys = advance(state, [0.3] * 100)
    assert ys[0] == pytest.approx(0.9 - T.friction_mu * DT, abs=1e-12)
    # a second flick relaunches at the current dwell's speed with a fresh
    # decay clock: one tick later only one tick's worth has been lost
    state, _ = advance(state, [0.6])
    relaunch = (T.max_time - 100 * DT) / T.max_time
    state, ys = advance(state, [0.3])
    assert ys[0] == pytest.approx(relaunch - T.friction_mu * DT, abs=1e-12)


def test_friction_compounding_variant_decays_faster():
    plain = ZoneState(variant=ZoneVariant.FRICTION, kind=ZoneKind.FLICK,
                      held_velocity=0.6, flick_pending_reset=True)
    comp_thresholds = ZoneThresholds(friction_compounding=True)
    comp = ZoneState(variant=ZoneVariant.FRICTION, kind=ZoneKind.FLICK,
                     held_velocity=0.6, flick_pending_reset=True)
    for k in range(200):
        plain, yp = step_zone(plain, 0.3, DT, T)
        comp, yc = step_zone(comp, 0.3, DT, comp_thresholds)
    # compounding re-derives from the decayed value, so held shrinks with it
    assert comp.held_velocity == yc
    assert plain.held_velocity == pytest.approx(0.6, abs=1e-12)


def test_additive_same_side_flicks_accumulate_and_clamp():
    state = ZoneState.initial(ZoneVariant.ADDITIVE)
    speeds = []
    for _ in range(4):
        state, _ = advance(state, [0.3] * 24)
        state, ys = advance(state, [0.6])
        speeds.append(ys[0])
    assert speeds[1] > speeds[0]
    assert speeds[-1] == 1.0
    assert all(s <= 1.0 for s in speeds)


def test_additive_counter_flick_subtracts():
    state = ZoneState.initial(ZoneVariant.ADDITIVE)
    state, _ = advance(state, [0.3] * 24 + [0.6])
    forward = state.held_velocity
    state, _ = advance(state, [-0.3] * 24)
    state, ys = advance(state, [-0.6])
    assert abs(ys[0]) < forward


def test_additive_unsigned_combine_flag():
    # The alternative reading adds the flick magnitude regardless of side.
    unsigned = ZoneThresholds(additive_unsigned_combine=True)
    state = ZoneState.initial(ZoneVariant.ADDITIVE)
    state, _ = advance(state, [0.3] * 24 + [0.6], unsigned)
    forward = state.held_velocity
    state, _ = advance(state, [-0.3] * 24, unsigned)
    state, ys = advance(state, [-0.6], unsigned)
    assert abs(ys[0]) >= forward - 1e-12


def test_mirror_symmetry_random_traces():
    rng = random.Random(19)
    for variant in ZoneVariant:
        for _ in range(25):
            pos = ZoneState.initial(variant)
            neg = ZoneState.initial(variant)
            for _ in range(250):
                x = rng.uniform(-1.0, 1.0)
                pos, yp = step_zone(pos, x, DT, T)
                neg, yn = step_zone(neg, -x, DT, T)
                assert yn == -yp


def test_output_bounded_random():
    rng = random.Random(23)
    for variant in ZoneVariant:
        state = ZoneState.initial(variant)
        for _ in range(2000):
            state, y = step_zone(state, rng.uniform(-1.0, 1.0), DT, T)
            assert abs(y) <= 1.0


def test_thresholds_validation():
    with pytest.raises(ValueError):
        ZoneThresholds(stop_edge=0.3, constant_edge=0.2)
    with pytest.raises(ValueError):
        ZoneThresholds(flick_edge=1.5)
    with pytest.raises(ValueError):
        ZoneThresholds(constant_speed=1.5)
    with pytest.raises(ValueError):
        ZoneThresholds(max_time=0.0)
    with pytest.raises(ValueError):
        ZoneThresholds(friction_mu=-0.1)


def test_step_zone_rejects_bad_dt():
    state = ZoneState.initial(ZoneVariant.CONTINUOUS)
    with pytest.raises(ValueError):
        step_zone(state, 0.0, 0.0, T)
    with pytest.raises(ValueError):
        step_zone(state, 0.0, math.nan, T)
