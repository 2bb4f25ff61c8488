import math
import random
import struct

import pytest

from headnav.controller import (DragFlickParams, DragFlickState, DragPhase,
                                drag_flick_step, push_release)
from headnav.rate import RateParams, polynomial

P = DragFlickParams()
DT = 1.0 / 120.0


def test_drag_output_is_gained_input():
    state = DragFlickState()
    for x in (-1.0, -0.4, 0.0, 0.3, 1.0):
        _, y = drag_flick_step(state, x, True, DT, P)
        assert y == P.gain * x


def test_drag_clamps_high_gain():
    hot = DragFlickParams(gain=3.0)
    _, y = drag_flick_step(DragFlickState(), 0.5, True, DT, hot)
    assert y == 1.0
    _, y = drag_flick_step(DragFlickState(), -0.5, True, DT, hot)
    assert y == -1.0
    _, y = drag_flick_step(DragFlickState(), 0.1, True, DT, hot)
    assert y == pytest.approx(0.3, abs=1e-15)


def test_release_at_rest_goes_idle():
    state, _ = drag_flick_step(DragFlickState(), 0.4, True, DT, P)
    assert state.phase is DragPhase.DRAGGING
    state, y = drag_flick_step(state, 0.0, False, DT, P)
    assert state.phase is DragPhase.IDLE
    assert y == 0.0


def test_release_moving_starts_flick():
    state, _ = drag_flick_step(DragFlickState(), 0.5, True, DT, P)
    state, y = drag_flick_step(state, 0.5, False, DT, P)
    assert state.phase is DragPhase.FLICKING
    assert state.release_velocity == 0.5
    # |2 * 0.5| - 1.5 * dt, below the clamp
    assert y == pytest.approx(1.0 - 1.5 * DT, abs=1e-12)


def test_flick_decays_linearly_to_zero():
    v = 0.3
    state, _ = drag_flick_step(DragFlickState(), v, True, DT, P)
    state, y = drag_flick_step(state, v, False, DT, P)
    ticks = 1
    while y != 0.0:
        expected = abs(P.flick_multiplier * v) - P.flick_damping * ticks * DT
        assert y == pytest.approx(min(1.0, expected), abs=1e-12)
        state, y = drag_flick_step(state, 0.0, False, DT, P)
        ticks += 1
        assert ticks < 1000
    assert state.phase is DragPhase.IDLE
    # zero crossing at |M*v|/D within one tick
    t_f = abs(P.flick_multiplier * v) / P.flick_damping
    assert abs(ticks * DT - t_f) <= DT + 1e-12


def test_flick_speed_caps_at_one():
    state, _ = drag_flick_step(DragFlickState(), 1.0, True, DT, P)
    state, y = drag_flick_step(state, 1.0, False, DT, P)
    assert y == 1.0


def test_flick_sign_follows_release_velocity():
    state, _ = drag_flick_step(DragFlickState(), -0.5, True, DT, P)
    state, y = drag_flick_step(state, -0.5, False, DT, P)
    assert y < 0.0


def test_press_cancels_flick():
    state, _ = drag_flick_step(DragFlickState(), 0.8, True, DT, P)
    state, _ = drag_flick_step(state, 0.8, False, DT, P)
    assert state.phase is DragPhase.FLICKING
    state, y = drag_flick_step(state, 0.0, True, DT, P)
    assert state.phase is DragPhase.DRAGGING
    assert y == 0.0
    state, y = drag_flick_step(state, 0.0, False, DT, P)
    assert state.phase is DragPhase.IDLE


def test_idle_stays_idle():
    state, y = drag_flick_step(DragFlickState(), 0.5, False, DT, P)
    assert state.phase is DragPhase.IDLE
    assert y == 0.0


def test_mirror_symmetry_random_traces():
    rng = random.Random(31)
    for _ in range(50):
        pos = DragFlickState()
        neg = DragFlickState()
        for _ in range(300):
            x = rng.uniform(-1.0, 1.0)
            b = rng.random() < 0.5
            pos, yp = drag_flick_step(pos, x, b, DT, P)
            neg, yn = drag_flick_step(neg, -x, b, DT, P)
            assert yn == -yp


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        drag_flick_step(DragFlickState(), 1.5, True, DT, P)
    with pytest.raises(ValueError):
        drag_flick_step(DragFlickState(), math.nan, False, DT, P)
    with pytest.raises(ValueError):
        drag_flick_step(DragFlickState(), 0.0, True, 0.0, P)


def test_params_validation():
    with pytest.raises(ValueError):
        DragFlickParams(gain=0.0)
    with pytest.raises(ValueError):
        DragFlickParams(flick_damping=-1.0)
    with pytest.raises(ValueError):
        DragFlickParams(full_scale_deg_s=0.0)


def test_push_release_is_polynomial_bitwise():
    rp = RateParams()
    for i in range(1000):
        x = -1.0 + 2.0 * i / 999.0
        a = push_release(x, rp)
        b = polynomial(x, rp)
        assert struct.pack("<d", a) == struct.pack("<d", b)


def test_push_release_custom_exponent():
    rp = RateParams(exponent=3.0)
    assert push_release(0.5, rp) == polynomial(0.5, rp) == 0.125
