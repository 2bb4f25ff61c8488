"""Stateless rate-control transfer functions: head yaw -> workspace velocity.

All three mappings take the normalized input x in [-1, 1] (see
geometry.normalize_yaw), share a dead zone and are odd around zero.
Out-of-range or non-finite inputs raise: clamping belongs upstream, so a
value arriving here outside [-1, 1] is a pipeline bug worth surfacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RateParams:
    """Constants shared by the rate mappings.

    dead_zone: half-width of the no-output band on x (0.11 is 10 degrees
        of yaw over the 90 degree half-range, as deployed).
    steepness / offset: logistic shape constants for the sigmoid.
    exponent: power for the polynomial curve.
    """

    dead_zone: float = 0.11
    steepness: float = 10.0
    offset: float = 5.0
    exponent: float = 2.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.dead_zone < 1.0):
            raise ValueError(f"dead_zone must lie in [0, 1), got {self.dead_zone!r}")
        if self.exponent <= 0.0:
            raise ValueError(f"exponent must be positive, got {self.exponent!r}")


DEFAULT_RATE_PARAMS = RateParams()


def _checked(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"normalized input must be finite, got {x!r}")
    if x < -1.0 or x > 1.0:
        raise ValueError(f"normalized input must lie in [-1, 1], got {x!r}")
    return x


def linear(x: float, params: RateParams = DEFAULT_RATE_PARAMS) -> float:
    """Identity transfer outside the dead zone."""
    x = _checked(x)
    if abs(x) <= params.dead_zone:
        return 0.0
    return x


def sigmoid(x: float, params: RateParams = DEFAULT_RATE_PARAMS) -> float:
    """Logistic transfer, mirrored for leftward input.

    Jumps discontinuously at the dead-zone edge (by design: the deployed
    curve was not shifted to zero there) and plateaus strictly below 1.
    """
    x = _checked(x)
    if x > params.dead_zone:
        return 1.0 / (1.0 + math.exp(-x * params.steepness + params.offset))
    if x < -params.dead_zone:
        return -1.0 / (1.0 + math.exp(x * params.steepness + params.offset))
    return 0.0


def polynomial(x: float, params: RateParams = DEFAULT_RATE_PARAMS) -> float:
    """Odd power-law transfer: slow near the dead zone, fast near full deflection."""
    x = _checked(x)
    if abs(x) <= params.dead_zone:
        return 0.0
    magnitude = abs(x) ** params.exponent
    return magnitude if x > 0.0 else -magnitude


RATE_FUNCTIONS = {
    "linear": linear,
    "sigmoid": sigmoid,
    "polynomial": polynomial,
}
