"""The configurable tracking pipeline: preprocess, detect, decide.

Five configuration points, three options each, mirroring the tuning
knobs of the tracking activity:

* rotation: undo a known camera mount rotation (none, cw90, cw180)
* enhance: image touch-up (identity, brighten, stretch)
* confidence: minimum fill ratio to accept a detection (low/medium/high)
* margins: per-side bounding-box shrink before the center is taken
* response: how hard the robot reacts (turn steps, forward steps, speed)

Every stage is a pure function; given the same frame and config the
same output comes back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Optional, Tuple

import numpy as np

from curiosim.commands import Command, Go, Stop
from curiosim.device.camera import Frame
from curiosim.kernels import largest_component

ROTATION_OPTIONS = ("none", "cw90", "cw180")
ENHANCE_OPTIONS = ("identity", "brighten", "stretch")
CONFIDENCE_OPTIONS = ("low", "medium", "high")
MARGIN_OPTIONS = ("tight", "medium", "wide")
RESPONSE_OPTIONS = ("slow", "medium", "fast")

BRIGHT_THRESHOLD = 128  # a pixel is bright when strictly above this
CONFIDENCE_THRESHOLDS = {"low": 0.30, "medium": 0.50, "high": 0.70}
MARGIN_SHRINK = {"tight": 0.0, "medium": 0.10, "wide": 0.20}
# response -> (turn_steps, forward_steps, speed)
RESPONSE_TABLE = {"slow": (50, 100, 300), "medium": (100, 200, 600), "fast": (200, 400, 1200)}
DEADBAND_FRACTION = 0.10
PROXIMITY_HEIGHT_FRACTION = 0.60
BRIGHTEN_OFFSET = 40

_OPTIONS = {
    "rotation": ROTATION_OPTIONS,
    "enhance": ENHANCE_OPTIONS,
    "confidence": CONFIDENCE_OPTIONS,
    "margins": MARGIN_OPTIONS,
    "response": RESPONSE_OPTIONS,
}


class ConfigError(ValueError):
    """Invalid pipeline config; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.reason = message


@dataclass(frozen=True)
class PipelineConfig:
    rotation: str = "none"
    enhance: str = "identity"
    confidence: str = "medium"
    margins: str = "medium"
    response: str = "medium"

    def __post_init__(self) -> None:
        for name, options in _OPTIONS.items():
            value = getattr(self, name)
            if value not in options:
                raise ConfigError(name, f"must be one of {', '.join(options)}; got {value!r}")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        if not isinstance(doc, dict):
            raise ConfigError("(root)", "config must be a JSON object")
        for key in doc:
            if key not in _OPTIONS:
                raise ConfigError(key, "unknown field")
        for key, value in doc.items():
            if not isinstance(value, str):
                raise ConfigError(key, f"must be a string, got {type(value).__name__}")
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> "PipelineConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("(json)", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
        return cls.from_dict(doc)


DEFAULT_CONFIG = PipelineConfig()


@dataclass(frozen=True)
class Detection:
    """One accepted detection.

    ``bbox`` is the margin-shrunk box (x0, y0, x1, y1), inclusive pixel
    coordinates; ``fill_ratio`` is measured on the raw component box
    before shrinking, so the confidence gate is independent of the
    margins option; ``center`` is the box midpoint (identical for the
    raw and the symmetrically shrunk box).
    """

    bbox: Tuple[int, int, int, int]
    fill_ratio: float
    center: Tuple[float, float]


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def preprocess(frame: Frame, config: PipelineConfig) -> Frame:
    """Undo the configured mount rotation, then apply the enhance option."""
    pixels = frame.pixels
    if config.rotation == "cw90":
        pixels = np.rot90(pixels, -1)
    elif config.rotation == "cw180":
        pixels = np.rot90(pixels, -2)

    if config.enhance == "brighten":
        pixels = np.clip(pixels.astype(np.int16) + BRIGHTEN_OFFSET, 0, 255).astype(np.uint8)
    elif config.enhance == "stretch":
        lo = int(pixels.min())
        hi = int(pixels.max())
        if hi > lo:
            # multiply before dividing: the product is integer-exact, so
            # midpoints land on .5 and round half-to-even predictably
            scaled = (pixels.astype(np.float64) - lo) * 255.0 / (hi - lo)
            pixels = np.rint(scaled).astype(np.uint8)

    if pixels is frame.pixels:
        return frame
    height, width = pixels.shape
    return Frame(width=width, height=height, pixels=np.ascontiguousarray(pixels), timestamp=frame.timestamp)


def detect(frame: Frame, config: PipelineConfig) -> Optional[Detection]:
    """Threshold, label 4-connected components, gate the largest by fill.

    Returns None when nothing is bright or the largest component's fill
    ratio falls below the configured confidence threshold.
    """
    mask = (frame.pixels > BRIGHT_THRESHOLD).astype(np.uint8)
    area, r0, c0, r1, c1 = largest_component(mask)
    if area == 0:
        return None
    bbox_area = (r1 - r0 + 1) * (c1 - c0 + 1)
    bright_in_bbox = int(np.count_nonzero(mask[r0 : r1 + 1, c0 : c1 + 1]))
    fill_ratio = bright_in_bbox / bbox_area
    if fill_ratio < CONFIDENCE_THRESHOLDS[config.confidence]:
        return None

    center = ((c0 + c1) / 2.0, (r0 + r1) / 2.0)
    shrink = MARGIN_SHRINK[config.margins]
    dx = shrink * (c1 - c0)
    dy = shrink * (r1 - r0)
    bbox = (
        int(round(c0 + dx)),
        int(round(r0 + dy)),
        int(round(c1 - dx)),
        int(round(r1 - dy)),
    )
    return Detection(bbox=bbox, fill_ratio=fill_ratio, center=center)


def decide(
    det: Optional[Detection],
    config: PipelineConfig,
    frame_width: int,
    frame_height: int,
) -> Command:
    """Decision table mapping a detection to the next motion command.

    No detection stops the robot.  A detection left or right of the
    deadband turns in place toward it; inside the deadband the robot
    approaches until the (shrunk) box fills 60% of the frame height,
    then stops.  The frame dimensions are those of the preprocessed
    frame the detection came from.
    """
    turn, forward, speed = RESPONSE_TABLE[config.response]
    if det is None:
        return Stop()
    deadband = DEADBAND_FRACTION * frame_width
    mid = frame_width / 2.0
    cx = det.center[0]
    if cx < mid - deadband:
        return Go(-turn, +turn, speed)
    if cx > mid + deadband:
        return Go(+turn, -turn, speed)
    box_height = det.bbox[3] - det.bbox[1] + 1
    if box_height < PROXIMITY_HEIGHT_FRACTION * frame_height:
        return Go(forward, forward, speed)
    return Stop()
