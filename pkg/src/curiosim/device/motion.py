"""Stepper-motor bookkeeping and differential-drive pose integration."""

from __future__ import annotations

import math
from dataclasses import dataclass

from curiosim.params import Pose, RobotParams, wrap_angle


# remainders below this many steps are rounding dust, not motion
_STEP_EPS = 1e-9


@dataclass
class MotorState:
    """One stepper: steps left to run, step rate, lifetime odometer.

    Step counts are floats: a tick at speed ``s`` consumes ``s * dt``
    steps, which need not be whole.  Carrying the fractional part makes
    consumed steps a function of elapsed time only, independent of how
    that time is cut into ticks.
    """

    remaining: float = 0.0
    speed: float = 500.0
    executed: float = 0.0

    def load(self, steps: float, speed: float) -> None:
        """Replace any in-flight motion with a fresh step budget."""
        self.remaining = float(steps)
        self.speed = float(speed)

    def halt(self) -> None:
        self.remaining = 0.0

    def consume(self, dt: float) -> float:
        """Run for ``dt`` seconds; returns signed steps actually taken."""
        if self.remaining == 0.0:
            return 0.0
        magnitude = min(abs(self.remaining), self.speed * dt)
        step = math.copysign(magnitude, self.remaining)
        self.remaining -= step
        if abs(self.remaining) < _STEP_EPS:
            self.remaining = 0.0
        self.executed += step
        return step

    def seconds_to_finish(self) -> float:
        """Time until this motor runs out of steps at its current rate."""
        if self.remaining == 0.0:
            return math.inf
        return abs(self.remaining) / self.speed

    @property
    def moving(self) -> bool:
        return self.remaining != 0.0


def pose_delta(params: RobotParams, dl_steps: float, dr_steps: float, pose: Pose) -> Pose:
    """Advance a pose by the exact arc for one consumed step pair.

    Equal wheel travel is a straight segment along the current heading
    (and leaves ``theta`` bit-for-bit unchanged).  Unequal travel follows
    the circular arc about the instantaneous center of curvature:

        dtheta = (d_r - d_l) / wheel_base
        R_c    = (wheel_base / 2) * (d_r + d_l) / (d_r - d_l)
    """
    mps = params.meters_per_step
    d_l = mps * dl_steps
    d_r = mps * dr_steps
    if d_l == d_r:
        if d_l == 0.0:
            return pose
        return Pose(
            pose.x + d_l * math.cos(pose.theta),
            pose.y + d_l * math.sin(pose.theta),
            pose.theta,
        )
    dtheta = (d_r - d_l) / params.wheel_base
    r_c = 0.5 * params.wheel_base * (d_r + d_l) / (d_r - d_l)
    theta1 = pose.theta + dtheta
    x = pose.x + r_c * (math.sin(theta1) - math.sin(pose.theta))
    y = pose.y - r_c * (math.cos(theta1) - math.cos(pose.theta))
    return Pose(x, y, wrap_angle(theta1))
