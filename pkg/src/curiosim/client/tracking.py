"""Tracking sessions: metric accounting and the live closed loop.

A session processes frames one at a time: preprocess, detect, decide,
send.  ``TrackingAccumulator`` turns the per-frame outcomes into
``TrackingMetrics``; it is shared by the deterministic in-process
runner, the live loop below, and the bridge's track mode, so all three
agree on what the numbers mean.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from typing import List, Optional

from curiosim.client.connection import ClientConnection, ClientError
from curiosim.client.pipeline import (
    DEADBAND_FRACTION,
    Detection,
    PipelineConfig,
    decide,
    detect,
    preprocess,
)
from curiosim.commands import Command, Stop
from curiosim.device.camera import Frame
from curiosim.transport.slot import FrameSlot

CONVERGENCE_WINDOW = 1.0
STARVATION_TIMEOUT = 2.0


class FrameStarvation(ClientError):
    """The frame source went quiet for longer than the starvation bound."""


@dataclass(frozen=True)
class TrackingMetrics:
    visibility_fraction: float
    mean_abs_center_err: float
    convergence_time: Optional[float]
    commands_sent: int
    frames_processed: int

    def to_dict(self) -> dict:
        return {
            "visibility_fraction": self.visibility_fraction,
            "mean_abs_center_err": self.mean_abs_center_err,
            "convergence_time": self.convergence_time,
            "commands_sent": self.commands_sent,
            "frames_processed": self.frames_processed,
        }


ZERO_METRICS = TrackingMetrics(0.0, 0.0, None, 0, 0)


@dataclass(frozen=True)
class FrameRecord:
    """One processed frame: when, what was seen, what was commanded."""

    t: float
    detected: bool
    center_err: Optional[float]
    in_deadband: bool
    sent: bool


class TrackingAccumulator:
    """Builds TrackingMetrics from a stream of FrameRecords.

    Convergence is the first moment the center error has stayed inside
    the deadband for one continuous second (a lost detection breaks the
    streak); the recorded time is streak start + window.
    """

    def __init__(self) -> None:
        self.records: List[FrameRecord] = []
        self._streak_start: Optional[float] = None
        self._convergence: Optional[float] = None
        self._commands = 0
        self._detected = 0
        self._abs_err_sum = 0.0

    def add(self, record: FrameRecord) -> None:
        self.records.append(record)
        if record.sent:
            self._commands += 1
        if record.detected:
            self._detected += 1
            if record.center_err is not None:
                self._abs_err_sum += abs(record.center_err)
        if record.in_deadband:
            if self._streak_start is None:
                self._streak_start = record.t
            if (
                self._convergence is None
                and record.t - self._streak_start >= CONVERGENCE_WINDOW - 1e-9
            ):
                self._convergence = self._streak_start + CONVERGENCE_WINDOW
        else:
            self._streak_start = None

    def metrics(self) -> TrackingMetrics:
        n = len(self.records)
        return TrackingMetrics(
            visibility_fraction=self._detected / n if n else 0.0,
            mean_abs_center_err=self._abs_err_sum / self._detected if self._detected else 0.0,
            convergence_time=self._convergence,
            commands_sent=self._commands,
            frames_processed=n,
        )


def process_frame(frame: Frame, config: PipelineConfig):
    """Run the pipeline stages on one frame.

    Returns (detection, command, center_err, in_deadband, width, height)
    where width and height are the preprocessed frame's dimensions.
    """
    processed = preprocess(frame, config)
    det = detect(processed, config)
    cmd = decide(det, config, processed.width, processed.height)
    center_err: Optional[float] = None
    in_deadband = False
    if det is not None:
        center_err = det.center[0] - processed.width / 2.0
        in_deadband = abs(center_err) <= DEADBAND_FRACTION * processed.width
    return det, cmd, center_err, in_deadband, processed.width, processed.height


class SendGate:
    """Suppresses repeated Stop commands; everything else passes."""

    def __init__(self) -> None:
        self._last_was_stop = False

    def should_send(self, cmd: Command) -> bool:
        return not (isinstance(cmd, Stop) and self._last_was_stop)

    def note_sent(self, cmd: Command) -> None:
        self._last_was_stop = isinstance(cmd, Stop)


class FramePump:
    """Background thread draining a frame iterator into a FrameSlot."""

    def __init__(self, frames, slot: Optional[FrameSlot] = None):
        self.slot = slot if slot is not None else FrameSlot()
        self._frames = frames
        self.error: Optional[BaseException] = None
        self._thread = threading.Thread(target=self._run, name="curio-frames", daemon=True)

    def start(self) -> "FramePump":
        self._thread.start()
        return self

    def _run(self) -> None:
        try:
            for frame in self._frames:
                self.slot.publish(frame)
        except BaseException as exc:  # noqa: BLE001 - recorded, loop ends
            self.error = exc


def track(
    conn: ClientConnection,
    frame_slot: FrameSlot,
    config: PipelineConfig,
    duration: float,
    starvation_timeout: float = STARVATION_TIMEOUT,
) -> TrackingMetrics:
    """Live closed loop against a frame slot, paced by the wall clock.

    Always processes the latest available frame; sends at most one
    command per frame (repeated Stops suppressed).  Raises
    FrameStarvation when no new frame arrives within the starvation
    bound, and propagates link errors from the connection.
    """
    acc = TrackingAccumulator()
    gate = SendGate()
    start = time.monotonic()
    seq, _ = frame_slot.latest()
    last_frame_at = start
    while True:
        now = time.monotonic()
        if now - start >= duration:
            break
        wait = min(0.25, duration - (now - start))
        got = frame_slot.wait_newer(seq, timeout=wait)
        if got is None:
            if time.monotonic() - last_frame_at > starvation_timeout:
                raise FrameStarvation(
                    f"no new frame for {starvation_timeout:.1f} s; aborting session"
                )
            continue
        last_frame_at = time.monotonic()
        seq, frame = got
        det, cmd, center_err, in_deadband, _, _ = process_frame(frame, config)
        sent = False
        if gate.should_send(cmd):
            conn.send_command(cmd)
            gate.note_sent(cmd)
            sent = True
        acc.add(
            FrameRecord(
                t=time.monotonic() - start,
                detected=det is not None,
                center_err=center_err,
                in_deadband=in_deadband,
                sent=sent,
            )
        )
    return acc.metrics()
