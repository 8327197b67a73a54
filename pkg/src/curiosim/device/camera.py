"""Synthetic smartphone camera: pinhole projection plus frame defects.

Targets render as filled bright discs (intensity 230) on a dark
background (intensity 20).  The projection places a target at bearing
beta (CCW-positive relative to the robot heading) at column

    width/2 - focal_px * tan(beta)

and at the row fixed by the mount tilt, height/2 + focal_px * tan(tilt),
clamped into the image.  The disc's pixel radius is
focal_px * radius / distance, clamped to [1, height/2].  Targets behind
the robot are culled; targets outside the field of view project off the
raster and clip away naturally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from curiosim.kernels import fill_disc
from curiosim.device.world import CameraModel, FrameNoise, Target, WorldModel
from curiosim.params import Pose, wrap_angle

BACKGROUND = 20
TARGET_INTENSITY = 230


@dataclass(frozen=True, eq=False)
class Frame:
    """One grayscale camera frame; ``pixels`` is row-major uint8 HxW."""

    width: int
    height: int
    pixels: np.ndarray
    timestamp: float


def project_target(camera: CameraModel, pose: Pose, tx: float, ty: float, radius: float):
    """Project one target; returns (col, row, r_px) or None when culled.

    ``col`` may fall outside the raster; the caller clips.  Culling only
    rejects targets with no forward component (at or behind the axle),
    where the pinhole model stops being meaningful.
    """
    dx = tx - pose.x
    dy = ty - pose.y
    forward = dx * math.cos(pose.theta) + dy * math.sin(pose.theta)
    if forward <= 0.0:
        return None
    distance = math.hypot(dx, dy)
    beta = wrap_angle(math.atan2(dy, dx) - pose.theta)
    focal = camera.focal_px
    col = camera.width / 2.0 - focal * math.tan(beta)
    row = camera.height / 2.0 + focal * math.tan(math.radians(camera.tilt_deg))
    row = min(max(row, 0.0), camera.height - 1.0)
    r_px = min(max(focal * radius / distance, 1.0), camera.height / 2.0)
    return col, row, r_px


def apply_noise(pixels: np.ndarray, noise: FrameNoise) -> np.ndarray:
    """Rotate, scale contrast about 128, shift brightness, clamp."""
    k = noise.rotation_deg // 90
    if k:
        pixels = np.rot90(pixels, k)
    if noise.contrast_scale == 1.0 and noise.brightness_offset == 0.0:
        return np.ascontiguousarray(pixels)
    values = pixels.astype(np.float64)
    values = 128.0 + (values - 128.0) * noise.contrast_scale + noise.brightness_offset
    return np.rint(np.clip(values, 0.0, 255.0)).astype(np.uint8)


def render_frame(world: WorldModel, pose: Pose, clock: float) -> Frame:
    """Pure renderer: identical (world, pose, clock) give identical frames."""
    camera = world.camera
    img = np.full((camera.height, camera.width), BACKGROUND, dtype=np.uint8)
    for target in world.targets:
        tx, ty = target.position(clock)
        projected = project_target(camera, pose, tx, ty, target.radius)
        if projected is None:
            continue
        col, row, r_px = projected
        fill_disc(img, col, row, r_px, TARGET_INTENSITY)
    img = apply_noise(img, world.frame_noise)
    height, width = img.shape
    return Frame(width=width, height=height, pixels=img, timestamp=clock)
