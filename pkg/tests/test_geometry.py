import math
import random

import pytest

from headnav.geometry import (DEG_PER_RAD, DisplayGeometry, angle_to_arc,
                              arc_to_angle, normalize_yaw, wrap_signed,
                              wrap_workspace)

GEOM = DisplayGeometry()


def test_default_geometry_constants():
    assert GEOM.radius_cm == 327.0
    assert GEOM.viewing_angle_deg == 180.0
    assert GEOM.window_arc_cm == 600.0
    assert GEOM.max_workspace_speed_deg_s == 100.0


@pytest.mark.parametrize("arc_cm,angle_deg", [
    (400.0, 70.0865804441374),
    (600.0, 105.1298706662061),
    (800.0, 140.1731608882748),
    (500.0, 87.60822555517174),
    (750.0, 131.41233833275763),
    (1000.0, 175.21645111034348),
])
def test_arc_angle_oracle(arc_cm, angle_deg):
    # oracle: theta = (w / r) * 180 / pi with r = 327
    assert arc_to_angle(arc_cm, GEOM) == pytest.approx(angle_deg, abs=1e-9)
    assert angle_to_arc(angle_deg, GEOM) == pytest.approx(arc_cm, abs=1e-9)


def test_max_speed_arc_equivalent():
    # 100 deg/s on a 327 cm radius: v = 100 / (180/pi) * 327
    assert GEOM.max_speed_cm_s == pytest.approx(570.7226654021457, abs=1e-9)


def test_arc_angle_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        arc = rng.uniform(0.0, 2054.0)
        assert angle_to_arc(arc_to_angle(arc, GEOM), GEOM) == pytest.approx(arc, rel=1e-12)


def test_arc_to_angle_rejects_bad_input():
    with pytest.raises(ValueError):
        arc_to_angle(math.nan, GEOM)
    with pytest.raises(ValueError):
        angle_to_arc(math.inf, GEOM)


def test_normalize_yaw_scale_and_clamp():
    assert normalize_yaw(0.0) == 0.0
    assert normalize_yaw(45.0) == 0.5
    assert normalize_yaw(-45.0) == -0.5
    assert normalize_yaw(90.0) == 1.0
    # beyond the half-range the sensor report is clamped, not rejected
    assert normalize_yaw(135.0) == 1.0
    assert normalize_yaw(-200.0) == -1.0
    assert normalize_yaw(30.0, half_range_deg=60.0) == 0.5


def test_normalize_yaw_rejects_non_finite():
    with pytest.raises(ValueError):
        normalize_yaw(math.nan)


def test_wrap_workspace_seams():
    assert wrap_workspace(0.0) == 0.0
    assert wrap_workspace(360.0) == 0.0
    assert wrap_workspace(-360.0) == 0.0
    assert wrap_workspace(359.5) == 359.5
    assert wrap_workspace(360.5) == 0.5
    assert wrap_workspace(-0.25) == 359.75
    assert wrap_workspace(720.0 + 10.0) == 10.0


def test_wrap_signed_seams():
    assert wrap_signed(0.0) == 0.0
    assert wrap_signed(180.0) == -180.0
    assert wrap_signed(-180.0) == -180.0
    assert wrap_signed(179.5) == 179.5
    assert wrap_signed(181.0) == -179.0
    assert wrap_signed(540.0) == -180.0


def test_wrap_ranges_random():
    rng = random.Random(7)
    for _ in range(500):
        a = rng.uniform(-5000.0, 5000.0)
        w = wrap_workspace(a)
        assert 0.0 <= w < 360.0
        s = wrap_signed(a)
        assert -180.0 <= s < 180.0
        # both wraps agree modulo 360
        assert math.isclose((w - s) % 360.0, 0.0, abs_tol=1e-9) or \
            math.isclose((w - s) % 360.0, 360.0, abs_tol=1e-9)


def test_deg_per_rad():
    assert DEG_PER_RAD == 180.0 / math.pi


def test_geometry_validation():
    with pytest.raises(ValueError):
        DisplayGeometry(radius_cm=0.0)
    with pytest.raises(ValueError):
        DisplayGeometry(window_arc_cm=-1.0)
    with pytest.raises(ValueError):
        DisplayGeometry(max_workspace_speed_deg_s=0.0)
