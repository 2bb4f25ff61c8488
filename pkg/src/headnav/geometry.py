"""Cylindrical display geometry and angle/arc conversions.

The display is a cylindrical section around the viewer; the scrollable
workspace wraps a full 360 degrees. Angles are degrees, lengths are
centimetres (measured along the arc at the display radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEG_PER_RAD = 180.0 / math.pi


@dataclass(frozen=True)
class DisplayGeometry:
    """Physical layout of the display plus the workspace speed limit.

    radius_cm: distance from the viewer to the screen surface.
    viewing_angle_deg: arc covered by the physical display.
    window_arc_cm: width of the scrollable window along the arc. Trials
        override this per condition; it is metadata for the simulation
        itself (the synthetic operator observes angular error directly).
    max_workspace_speed_deg_s: workspace speed at full deflection (y = 1).
    """

    radius_cm: float = 327.0
    viewing_angle_deg: float = 180.0
    window_arc_cm: float = 600.0
    max_workspace_speed_deg_s: float = 100.0

    def __post_init__(self) -> None:
        for name in ("radius_cm", "viewing_angle_deg", "window_arc_cm",
                     "max_workspace_speed_deg_s"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"geometry.{name} must be a positive finite number, got {value!r}")

    @property
    def max_speed_cm_s(self) -> float:
        """Workspace speed limit expressed along the arc."""
        return angle_to_arc(self.max_workspace_speed_deg_s, self)


def arc_to_angle(arc_cm: float, geometry: DisplayGeometry) -> float:
    """Convert an arc length on the display surface to degrees at the viewer."""
    if not (math.isfinite(arc_cm) and arc_cm >= 0.0):
        raise ValueError(f"arc length must be finite and non-negative, got {arc_cm!r}")
    return arc_cm / geometry.radius_cm * DEG_PER_RAD


def angle_to_arc(angle_deg: float, geometry: DisplayGeometry) -> float:
    """Convert an angle at the viewer to arc length on the display surface."""
    if not math.isfinite(angle_deg):
        raise ValueError(f"angle must be finite, got {angle_deg!r}")
    return angle_deg / DEG_PER_RAD * geometry.radius_cm


def normalize_yaw(yaw_deg: float, half_range_deg: float = 90.0) -> float:
    """Map head yaw to the normalized input x in [-1, 1], clamping at the ends."""
    if not math.isfinite(yaw_deg):
        raise ValueError(f"yaw must be finite, got {yaw_deg!r}")
    x = yaw_deg / half_range_deg
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


def wrap_workspace(angle_deg: float) -> float:
    """Wrap a workspace angle into [0, 360)."""
    if not math.isfinite(angle_deg):
        raise ValueError(f"workspace angle must be finite, got {angle_deg!r}")
    wrapped = angle_deg - 360.0 * math.floor(angle_deg / 360.0)
    # Rounding at the seam can land exactly on 360 or fractionally below 0.
    if wrapped >= 360.0:
        wrapped -= 360.0
    if wrapped < 0.0:
        wrapped += 360.0
    return wrapped


def wrap_signed(delta_deg: float) -> float:
    """Wrap an angular difference into [-180, 180)."""
    if not math.isfinite(delta_deg):
        raise ValueError(f"angle difference must be finite, got {delta_deg!r}")
    wrapped = delta_deg - 360.0 * math.floor((delta_deg + 180.0) / 360.0)
    if wrapped < -180.0:
        wrapped += 360.0
    if wrapped >= 180.0:
        wrapped -= 360.0
    return wrapped
