"""The virtual robot: motors, kinematics, world state, camera, clock."""

from curiosim.device.camera import BACKGROUND, TARGET_INTENSITY, Frame, render_frame
from curiosim.device.core import VirtualDevice
from curiosim.device.motion import MotorState, pose_delta
from curiosim.device.world import (
    CameraModel,
    FrameNoise,
    Target,
    WorldError,
    WorldModel,
    load_world,
    resolve_world,
)

__all__ = [
    "BACKGROUND",
    "TARGET_INTENSITY",
    "CameraModel",
    "Frame",
    "FrameNoise",
    "MotorState",
    "Target",
    "VirtualDevice",
    "WorldError",
    "WorldModel",
    "load_world",
    "pose_delta",
    "render_frame",
    "resolve_world",
]
