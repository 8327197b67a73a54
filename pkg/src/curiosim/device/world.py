"""World description: robot start pose, targets, camera, frame defects.

Worlds load from a JSON document in which every field is optional:

    {
      "robot":   {"x": 0, "y": 0, "theta": 0},
      "targets": [{"id": "face", "x": 1.5, "y": 0, "radius": 0.15,
                   "waypoints": [{"x": 1, "y": 1, "dwell_s": 2.0}]}],
      "camera":  {"fov_deg": 60, "width": 320, "height": 240, "tilt_deg": 0},
      "frame_noise": {"rotation_deg": 0, "brightness_offset": 0,
                      "contrast_scale": 1.0}
    }

Loader errors carry the dotted path of the offending field.  A few
named worlds used throughout the tests and benchmarks are built in; see
``WORLDS``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from curiosim.params import Pose


class WorldError(ValueError):
    """Invalid world description; ``path`` is the dotted field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    dwell_s: float


@dataclass(frozen=True)
class Target:
    """A trackable face stand-in: a disc of given radius in the plane.

    With waypoints, the target sits at each station for its dwell time
    and then jumps to the next, cycling forever.  Without waypoints it
    stays at (x, y).
    """

    id: str
    x: float
    y: float
    radius: float
    waypoints: tuple[Waypoint, ...] = ()

    def position(self, clock: float) -> tuple[float, float]:
        if not self.waypoints:
            return self.x, self.y
        total = sum(w.dwell_s for w in self.waypoints)
        if total <= 0.0:
            return self.x, self.y
        tau = clock % total
        for w in self.waypoints:
            if tau < w.dwell_s:
                return w.x, w.y
            tau -= w.dwell_s
        last = self.waypoints[-1]
        return last.x, last.y


@dataclass(frozen=True)
class CameraModel:
    """Pinhole camera on the phone mount, tilted upward by ``tilt_deg``."""

    fov_deg: float = 60.0
    width: int = 320
    height: int = 240
    tilt_deg: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.fov_deg < 180.0):
            raise ValueError("fov_deg must be in (0, 180)")
        if not (0.0 <= self.tilt_deg <= 90.0):
            raise ValueError("tilt_deg must be in [0, 90]")
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be positive")

    @property
    def focal_px(self) -> float:
        return (self.width / 2.0) / math.tan(math.radians(self.fov_deg) / 2.0)


@dataclass(frozen=True)
class FrameNoise:
    """Defects applied to every rendered frame, in this order:
    rotate, contrast about 128, brightness offset, clamp to [0, 255]."""

    rotation_deg: int = 0
    brightness_offset: float = 0.0
    contrast_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.rotation_deg not in (0, 90, 180, 270):
            raise ValueError("rotation_deg must be one of 0, 90, 180, 270")
        if not (0.0 < self.contrast_scale <= 1.0):
            raise ValueError("contrast_scale must be in (0, 1]")


@dataclass(frozen=True)
class WorldModel:
    robot_start: Pose = Pose()
    targets: tuple[Target, ...] = ()
    camera: CameraModel = CameraModel()
    frame_noise: FrameNoise = FrameNoise()


# ---------------------------------------------------------------------------
# JSON loading with dotted-path diagnostics
# ---------------------------------------------------------------------------

def _want(obj, path, types, typename):
    if not isinstance(obj, types) or isinstance(obj, bool):
        raise WorldError(path, f"expected {typename}, got {type(obj).__name__}")
    return obj


def _number(obj, path) -> float:
    return float(_want(obj, path, (int, float), "a number"))


def _integer(obj, path) -> int:
    return int(_want(obj, path, int, "an integer"))


def _mapping(obj, path, allowed: tuple[str, ...]) -> dict:
    d = _want(obj, path, dict, "an object")
    for key in d:
        if key not in allowed:
            raise WorldError(f"{path}.{key}" if path else key, "unknown field")
    return d


def world_from_dict(doc: dict) -> WorldModel:
    """Build a WorldModel, raising WorldError with the offending path."""
    top = _mapping(doc, "", ("robot", "targets", "camera", "frame_noise"))

    robot = Pose()
    if "robot" in top:
        r = _mapping(top["robot"], "robot", ("x", "y", "theta"))
        robot = Pose.make(
            _number(r.get("x", 0.0), "robot.x"),
            _number(r.get("y", 0.0), "robot.y"),
            _number(r.get("theta", 0.0), "robot.theta"),
        )

    targets: list[Target] = []
    if "targets" in top:
        items = _want(top["targets"], "targets", list, "a list")
        for i, item in enumerate(items):
            path = f"targets[{i}]"
            t = _mapping(item, path, ("id", "x", "y", "radius", "waypoints"))
            radius = _number(t.get("radius", 0.15), f"{path}.radius")
            if radius <= 0.0:
                raise WorldError(f"{path}.radius", "must be positive")
            waypoints: list[Waypoint] = []
            if "waypoints" in t:
                wps = _want(t["waypoints"], f"{path}.waypoints", list, "a list")
                for j, wp in enumerate(wps):
                    wpath = f"{path}.waypoints[{j}]"
                    w = _mapping(wp, wpath, ("x", "y", "dwell_s"))
                    dwell = _number(w.get("dwell_s", 0.0), f"{wpath}.dwell_s")
                    if dwell < 0.0:
                        raise WorldError(f"{wpath}.dwell_s", "must be >= 0")
                    waypoints.append(
                        Waypoint(
                            _number(w.get("x", 0.0), f"{wpath}.x"),
                            _number(w.get("y", 0.0), f"{wpath}.y"),
                            dwell,
                        )
                    )
            targets.append(
                Target(
                    id=str(t.get("id", f"target{i}")),
                    x=_number(t.get("x", 0.0), f"{path}.x"),
                    y=_number(t.get("y", 0.0), f"{path}.y"),
                    radius=radius,
                    waypoints=tuple(waypoints),
                )
            )

    camera = CameraModel()
    if "camera" in top:
        c = _mapping(top["camera"], "camera", ("fov_deg", "width", "height", "tilt_deg"))
        try:
            camera = CameraModel(
                fov_deg=_number(c.get("fov_deg", 60.0), "camera.fov_deg"),
                width=_integer(c.get("width", 320), "camera.width"),
                height=_integer(c.get("height", 240), "camera.height"),
                tilt_deg=_number(c.get("tilt_deg", 0.0), "camera.tilt_deg"),
            )
        except ValueError as exc:
            if isinstance(exc, WorldError):
                raise
            raise WorldError("camera", str(exc)) from None

    noise = FrameNoise()
    if "frame_noise" in top:
        n = _mapping(
            top["frame_noise"],
            "frame_noise",
            ("rotation_deg", "brightness_offset", "contrast_scale"),
        )
        try:
            noise = FrameNoise(
                rotation_deg=_integer(n.get("rotation_deg", 0), "frame_noise.rotation_deg"),
                brightness_offset=_number(
                    n.get("brightness_offset", 0.0), "frame_noise.brightness_offset"
                ),
                contrast_scale=_number(
                    n.get("contrast_scale", 1.0), "frame_noise.contrast_scale"
                ),
            )
        except ValueError as exc:
            if isinstance(exc, WorldError):
                raise
            raise WorldError("frame_noise", str(exc)) from None

    return WorldModel(robot_start=robot, targets=tuple(targets), camera=camera, frame_noise=noise)


def load_world(path: str) -> WorldModel:
    """Load a world JSON file; WorldError on schema or syntax problems."""
    try:
        with open(path, "rb") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise WorldError("(file)", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise WorldError("(file)", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return world_from_dict(doc)


# ---------------------------------------------------------------------------
# Built-in worlds
# ---------------------------------------------------------------------------

_BEARING_30 = math.radians(30.0)


def standard_world() -> WorldModel:
    """One face-size target at bearing 30 degrees, 1.5 m out; no noise."""
    return WorldModel(
        robot_start=Pose(),
        targets=(
            Target(
                id="face",
                x=1.5 * math.cos(_BEARING_30),
                y=1.5 * math.sin(_BEARING_30),
                radius=0.15,
            ),
        ),
    )


def rotated_world() -> WorldModel:
    """Standard scene but the camera app delivers frames rotated 180."""
    base = standard_world()
    return WorldModel(
        robot_start=base.robot_start,
        targets=base.targets,
        camera=base.camera,
        frame_noise=FrameNoise(rotation_deg=180),
    )


def dim_world() -> WorldModel:
    """Standard scene through a dark, washed-out camera: the target
    lands below the detection threshold unless an enhance option runs."""
    base = standard_world()
    return WorldModel(
        robot_start=base.robot_start,
        targets=base.targets,
        camera=base.camera,
        frame_noise=FrameNoise(brightness_offset=-80.0, contrast_scale=0.5),
    )


def small_target_world() -> WorldModel:
    """A target rendered a couple of pixels wide, dead ahead: its
    digitized fill ratio sits between the medium and high confidence
    thresholds."""
    return WorldModel(
        robot_start=Pose(),
        targets=(Target(id="speck", x=1.5, y=0.0, radius=0.0065),),
    )


WORLDS = {
    "standard": standard_world,
    "rotated": rotated_world,
    "dim": dim_world,
    "smalltarget": small_target_world,
}


def resolve_world(name_or_path: str) -> tuple[str, WorldModel]:
    """Map a builtin name or JSON file path to (world_id, WorldModel)."""
    if name_or_path in WORLDS:
        return name_or_path, WORLDS[name_or_path]()
    world = load_world(name_or_path)
    stem = name_or_path.rsplit("/", 1)[-1]
    if stem.endswith(".json"):
        stem = stem[: -len(".json")]
    return stem, world
