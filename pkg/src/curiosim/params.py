"""Robot geometry, motion limits, and planar pose."""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# Protocol-level sanity bounds, independent of any configured robot.
MAX_ABS_STEPS = 1_000_000
MIN_SPEED = 1
MAX_PROTOCOL_SPEED = 2000


def wrap_angle(theta: float) -> float:
    """Normalize an angle to the half-open interval (-pi, pi]."""
    t = (theta + math.pi) % TWO_PI - math.pi
    if t == -math.pi:
        return math.pi
    return t


@dataclass(frozen=True)
class RobotParams:
    """Wheel geometry and stepper limits of the two-wheeled platform.

    Distances are meters, speeds are motor steps per second.
    """

    wheel_radius: float = 0.03
    wheel_base: float = 0.12
    steps_per_rev: int = 2048
    max_speed: int = 2000
    default_speed: int = 500

    def __post_init__(self) -> None:
        if self.wheel_radius <= 0 or self.wheel_base <= 0:
            raise ValueError("wheel_radius and wheel_base must be positive")
        if self.steps_per_rev <= 0:
            raise ValueError("steps_per_rev must be positive")
        if not (0 < self.default_speed <= self.max_speed):
            raise ValueError("need 0 < default_speed <= max_speed")

    @property
    def meters_per_step(self) -> float:
        return TWO_PI * self.wheel_radius / self.steps_per_rev


@dataclass(frozen=True)
class Pose:
    """Planar pose: position in meters, heading in radians, CCW-positive.

    ``theta`` is kept in (-pi, pi]; use :meth:`make` to build one from an
    arbitrary angle.
    """

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    @classmethod
    def make(cls, x: float, y: float, theta: float) -> "Pose":
        return cls(x, y, wrap_angle(theta))


DEFAULT_PARAMS = RobotParams()
