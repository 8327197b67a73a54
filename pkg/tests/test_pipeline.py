"""Tracking pipeline stages: preprocess, detect, decide, config parsing."""

import math
import random

import numpy as np
import pytest

from curiosim.commands import Go, Stop
from curiosim.device.camera import BACKGROUND, TARGET_INTENSITY, Frame
from curiosim.kernels import fill_disc
from curiosim.client.pipeline import (
    ConfigError,
    Detection,
    PipelineConfig,
    decide,
    detect,
    preprocess,
)


def _blank(width=320, height=240) -> np.ndarray:
    return np.full((height, width), BACKGROUND, dtype=np.uint8)


def _frame(pixels: np.ndarray, timestamp=0.0) -> Frame:
    h, w = pixels.shape
    return Frame(width=w, height=h, pixels=pixels, timestamp=timestamp)


def _disc_frame(cx, cy, radius, width=320, height=240) -> Frame:
    pixels = _blank(width, height)
    fill_disc(pixels, cx, cy, radius, TARGET_INTENSITY)
    return _frame(pixels)


# -- preprocess ---------------------------------------------------------------

def test_identity_config_returns_the_same_frame_object():
    frame = _disc_frame(160, 120, 30)
    assert preprocess(frame, PipelineConfig()) is frame


def test_cw180_option_undoes_a_180_mount():
    frame = _disc_frame(40, 60, 20)
    flipped = _frame(np.ascontiguousarray(np.rot90(frame.pixels, 2)))
    restored = preprocess(flipped, PipelineConfig(rotation="cw180"))
    assert np.array_equal(restored.pixels, frame.pixels)


def test_cw90_option_swaps_dimensions_back():
    frame = _disc_frame(40, 60, 20, width=320, height=240)
    mounted = _frame(np.ascontiguousarray(np.rot90(frame.pixels, 1)))  # 240x320
    restored = preprocess(mounted, PipelineConfig(rotation="cw90"))
    assert (restored.width, restored.height) == (320, 240)
    assert np.array_equal(restored.pixels, frame.pixels)


def test_brighten_clamps_at_255():
    pixels = _blank(4, 2)
    pixels[0, 0] = 250
    out = preprocess(_frame(pixels), PipelineConfig(enhance="brighten"))
    assert out.pixels[0, 0] == 255
    assert out.pixels[1, 1] == BACKGROUND + 40


def test_stretch_maps_extremes_to_full_range():
    pixels = _blank(4, 2)  # all 20
    pixels[0, 0] = 120
    pixels[0, 1] = 70  # halfway: (70-20)*255/100 = 127.5 rounds to even 128
    out = preprocess(_frame(pixels), PipelineConfig(enhance="stretch"))
    assert out.pixels[0, 0] == 255
    assert out.pixels[1, 1] == 0
    assert out.pixels[0, 1] == 128


def test_stretch_leaves_constant_frame_alone():
    frame = _frame(_blank(8, 8))
    out = preprocess(frame, PipelineConfig(enhance="stretch"))
    assert out is frame


def test_detect_invariant_under_stretch_when_already_full_range():
    pixels = _blank()
    fill_disc(pixels, 100.0, 80.0, 25.0, 255)
    pixels[0, 0] = 0  # pin the low end
    frame = _frame(pixels)
    plain = detect(frame, PipelineConfig())
    stretched = detect(preprocess(frame, PipelineConfig(enhance="stretch")), PipelineConfig())
    assert plain == stretched


# -- detect -------------------------------------------------------------------

def test_centered_disc_detection_geometry():
    frame = _disc_frame(160.0, 120.0, 40.0)
    # brute-force oracle for the fill ratio: bright pixels / bbox area
    mask = frame.pixels > 128
    rows, cols = np.nonzero(mask)
    bbox_area = (rows.max() - rows.min() + 1) * (cols.max() - cols.min() + 1)
    expected_fill = mask.sum() / bbox_area

    for confidence in ("low", "medium", "high"):
        det = detect(frame, PipelineConfig(confidence=confidence))
        assert det is not None
        assert det.fill_ratio == expected_fill
        assert abs(det.fill_ratio - math.pi / 4) < 0.02
        assert abs(det.center[0] - 160.0) <= 1.0
        assert abs(det.center[1] - 120.0) <= 1.0


def test_uniform_dark_frame_detects_nothing():
    assert detect(_frame(_blank()), PipelineConfig()) is None


def test_larger_of_two_discs_wins():
    pixels = _blank()
    fill_disc(pixels, 60.0, 60.0, 10.0, TARGET_INTENSITY)
    fill_disc(pixels, 240.0, 150.0, 20.0, TARGET_INTENSITY)
    det = detect(_frame(pixels), PipelineConfig(confidence="low"))
    assert det is not None
    assert abs(det.center[0] - 240.0) <= 1.0
    assert abs(det.center[1] - 150.0) <= 1.0


def test_confidence_gate_thresholds():
    # a plus-shaped component fills 5 of its 3x3 bbox: ratio 0.5556
    pixels = _blank(9, 9)
    plus = [(3, 4), (4, 3), (4, 4), (4, 5), (5, 4)]
    for r, c in plus:
        pixels[r, c] = TARGET_INTENSITY
    frame = _frame(pixels)
    assert detect(frame, PipelineConfig(confidence="low")) is not None
    assert detect(frame, PipelineConfig(confidence="medium")) is not None
    assert detect(frame, PipelineConfig(confidence="high")) is None
    det = detect(frame, PipelineConfig(confidence="medium"))
    assert det.fill_ratio == 5 / 9


def test_margins_never_move_the_center():
    rng = random.Random(0xD15C)
    for _ in range(40):
        cx = rng.uniform(30, 290)
        cy = rng.uniform(30, 210)
        radius = rng.uniform(5, 28)
        frame = _disc_frame(cx, cy, radius)
        centers = set()
        for margins in ("tight", "medium", "wide"):
            det = detect(frame, PipelineConfig(margins=margins, confidence="low"))
            assert det is not None
            centers.add(det.center)
        assert len(centers) == 1  # exactly equal, not just close


def test_margins_shrink_stays_inside_the_raw_bbox():
    frame = _disc_frame(100.0, 90.0, 33.0)
    tight = detect(frame, PipelineConfig(margins="tight"))
    medium = detect(frame, PipelineConfig(margins="medium"))
    wide = detect(frame, PipelineConfig(margins="wide"))
    tx0, ty0, tx1, ty1 = tight.bbox
    for det in (medium, wide):
        x0, y0, x1, y1 = det.bbox
        assert tx0 <= x0 <= x1 <= tx1
        assert ty0 <= y0 <= y1 <= ty1
    # wide cuts deeper than medium
    assert wide.bbox[0] >= medium.bbox[0]
    assert wide.bbox[2] <= medium.bbox[2]


def test_fill_ratio_is_margin_independent():
    frame = _disc_frame(160.0, 120.0, 25.0)
    ratios = {
        detect(frame, PipelineConfig(margins=m)).fill_ratio
        for m in ("tight", "medium", "wide")
    }
    assert len(ratios) == 1


# -- decide ---------------------------------------------------------------------

def _det(cx, cy=120.0, height=40) -> Detection:
    half = height // 2
    return Detection(
        bbox=(int(cx) - half, int(cy) - half, int(cx) + half, int(cy) + half),
        fill_ratio=0.8,
        center=(cx, cy),
    )


def test_no_detection_stops():
    assert decide(None, PipelineConfig(), 320, 240) == Stop()


def test_target_left_turns_ccw_fast():
    det = _det(0.2 * 320)
    cmd = decide(det, PipelineConfig(response="fast"), 320, 240)
    assert cmd == Go(-200, 200, 1200)


def test_target_right_turns_cw():
    det = _det(0.9 * 320)
    for response, (turn, _fwd, speed) in (
        ("slow", (50, 100, 300)),
        ("medium", (100, 200, 600)),
        ("fast", (200, 400, 1200)),
    ):
        cmd = decide(det, PipelineConfig(response=response), 320, 240)
        assert cmd == Go(turn, -turn, speed)


def test_centered_and_small_approaches():
    det = _det(160.0, height=40)
    assert decide(det, PipelineConfig(response="medium"), 320, 240) == Go(200, 200, 600)
    assert decide(det, PipelineConfig(response="slow"), 320, 240) == Go(100, 100, 300)


def test_centered_and_tall_stops():
    det = _det(160.0, height=170)  # 170 >= 0.6 * 240 = 144
    assert decide(det, PipelineConfig(), 320, 240) == Stop()


def test_deadband_boundaries():
    cfg = PipelineConfig(response="medium")
    inside_left = _det(160.0 - 31.9)
    outside_left = _det(160.0 - 32.1)  # deadband is 10% of 320 = 32
    assert decide(inside_left, cfg, 320, 240) == Go(200, 200, 600)
    assert decide(outside_left, cfg, 320, 240) == Go(-100, 100, 600)


def test_decide_is_pure():
    det = _det(100.0)
    cfg = PipelineConfig(response="fast")
    assert decide(det, cfg, 320, 240) == decide(det, cfg, 320, 240)


# -- config parsing ----------------------------------------------------------------

def test_config_round_trips_through_dict():
    cfg = PipelineConfig(rotation="cw90", enhance="stretch", confidence="high",
                         margins="wide", response="slow")
    assert PipelineConfig.from_dict(cfg.to_dict()) == cfg


def test_config_defaults():
    cfg = PipelineConfig()
    assert cfg.to_dict() == {
        "rotation": "none",
        "enhance": "identity",
        "confidence": "medium",
        "margins": "medium",
        "response": "medium",
    }


def test_config_partial_dict_fills_defaults():
    cfg = PipelineConfig.from_dict({"response": "fast"})
    assert cfg.response == "fast"
    assert cfg.rotation == "none"


def test_config_rejects_unknown_field():
    with pytest.raises(ConfigError) as exc:
        PipelineConfig.from_dict({"rotatoin": "none"})
    assert exc.value.field == "rotatoin"


def test_config_rejects_bad_option_value():
    with pytest.raises(ConfigError) as exc:
        PipelineConfig.from_dict({"confidence": "extreme"})
    assert exc.value.field == "confidence"
    assert "low" in exc.value.reason


def test_config_rejects_non_string_value():
    with pytest.raises(ConfigError) as exc:
        PipelineConfig.from_dict({"confidence": 3})
    assert exc.value.field == "confidence"


def test_config_rejects_invalid_json():
    with pytest.raises(ConfigError) as exc:
        PipelineConfig.from_json("{not json")
    assert exc.value.field == "(json)"


def test_config_from_json_happy_path():
    cfg = PipelineConfig.from_json('{"rotation":"cw180","response":"slow"}')
    assert cfg.rotation == "cw180"
    assert cfg.response == "slow"
