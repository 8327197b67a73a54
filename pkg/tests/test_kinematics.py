"""Differential-drive kinematics against an independent Euler oracle."""

import math
import random

from curiosim.commands import Go
from curiosim.device.core import VirtualDevice
from curiosim.device.motion import pose_delta
from curiosim.device.world import WorldModel
from curiosim.kernels import euler_integrate
from curiosim.params import DEFAULT_PARAMS, Pose, wrap_angle

MPS = DEFAULT_PARAMS.meters_per_step


def test_meters_per_step_constant():
    assert MPS == 2 * math.pi * 0.03 / 2048


def test_straight_thousand_steps():
    # 1000 equal steps: 2*pi*0.03*1000/2048 meters dead ahead
    end = pose_delta(DEFAULT_PARAMS, 1000, 1000, Pose(0.0, 0.0, 0.0))
    assert end.x == 0.09203884727313846
    assert end.y == 0.0
    assert end.theta == 0.0


def test_in_place_quarter_turn_clockwise():
    end = pose_delta(DEFAULT_PARAMS, 1024, -1024, Pose(0.0, 0.0, 0.0))
    assert end.theta == -1.5707963267948966
    assert abs(end.x) < 1e-15
    assert abs(end.y) < 1e-15


def test_zero_steps_is_identity():
    start = Pose(0.25, -0.5, 1.1)
    assert pose_delta(DEFAULT_PARAMS, 0, 0, start) == start


def _euler_oracle(dl_steps: float, dr_steps: float, speed: float, pose: Pose):
    # slice the motion as if ticked at dt=1e-4 for the given step rate
    duration = max(abs(dl_steps), abs(dr_steps)) / speed
    n = max(1, math.ceil(duration / 1e-4))
    dx, dy, dth = euler_integrate(
        dl_steps * MPS, dr_steps * MPS, DEFAULT_PARAMS.wheel_base, pose.theta, n
    )
    return pose.x + dx, pose.y + dy, wrap_angle(pose.theta + dth)


def test_closed_form_tracks_euler_integration():
    rng = random.Random(0xCA11)
    for _ in range(200):
        dl = rng.randint(-5000, 5000)
        dr = rng.randint(-5000, 5000)
        speed = rng.randint(500, 2000)
        pose = Pose(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-math.pi, math.pi))
        got = pose_delta(DEFAULT_PARAMS, dl, dr, pose)
        ex, ey, eth = _euler_oracle(dl, dr, speed, pose)
        scale = max(abs(dl), abs(dr), 1) * MPS
        assert math.hypot(got.x - ex, got.y - ey) <= 1e-4 * scale
        assert abs(wrap_angle(got.theta - eth)) <= 1e-6


def test_closed_form_tracks_euler_at_low_speed():
    # low speed means many slices per step; keep step counts small
    rng = random.Random(0xCA12)
    for speed in (1, 5, 50):
        for _ in range(3):
            dl = rng.randint(-200, 200)
            dr = rng.randint(-200, 200)
            pose = Pose(0.0, 0.0, rng.uniform(-math.pi, math.pi))
            got = pose_delta(DEFAULT_PARAMS, dl, dr, pose)
            ex, ey, eth = _euler_oracle(dl, dr, speed, pose)
            scale = max(abs(dl), abs(dr), 1) * MPS
            assert math.hypot(got.x - ex, got.y - ey) <= 1e-4 * scale
            assert abs(wrap_angle(got.theta - eth)) <= 1e-6


def test_equal_steps_preserve_heading_exactly():
    rng = random.Random(404)
    for _ in range(300):
        theta = rng.uniform(-math.pi, math.pi)
        pose = Pose(rng.uniform(-2, 2), rng.uniform(-2, 2), theta)
        steps = rng.randint(-5000, 5000)
        end = pose_delta(DEFAULT_PARAMS, steps, steps, pose)
        assert abs(end.theta - theta) <= 1e-9


def _drain(device: VirtualDevice) -> None:
    while device.moving:
        device.tick()


def test_out_and_back_returns_to_start():
    rng = random.Random(777)
    world = WorldModel()
    for _ in range(25):
        device = VirtualDevice(world)
        steps = rng.randint(1, 5000)
        speed = rng.randint(100, 2000)
        device.exec(Go(steps, steps, speed))
        _drain(device)
        device.exec(Go(-steps, -steps, speed))
        _drain(device)
        pose = device.pose
        assert math.hypot(pose.x - world.robot_start.x, pose.y - world.robot_start.y) < 1e-6
        assert abs(wrap_angle(pose.theta - world.robot_start.theta)) < 1e-9


def test_heading_always_normalized():
    rng = random.Random(31415)
    pose = Pose(0.0, 0.0, 0.0)
    for _ in range(500):
        dl = rng.randint(-5000, 5000)
        dr = rng.randint(-5000, 5000)
        pose = pose_delta(DEFAULT_PARAMS, dl, dr, pose)
        assert -math.pi < pose.theta <= math.pi


def test_wrap_angle_edges():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == math.pi
    assert abs(wrap_angle(2 * math.pi)) < 1e-15
