"""Threaded wrapper around VirtualDevice for live (wall-clock) use.

The device itself is single-threaded; this service owns it on a
background thread that ticks in real time, publishes frames to a
latest-value slot, and executes command lines arriving through a
thread-safe queue.  It also hosts the mode state (idle / teleop /
track) and, in track mode, runs the tracking loop in-process so the
bridge API can expose live metrics and accept live config changes.
"""

from __future__ import annotations

import queue
import threading
import time
from concurrent.futures import Future
from typing import Optional

from curiosim.client.pipeline import PipelineConfig
from curiosim.client.tracking import (
    FrameRecord,
    SendGate,
    TrackingAccumulator,
    TrackingMetrics,
    ZERO_METRICS,
    process_frame,
)
from curiosim.commands import format_command
from curiosim.device.core import VirtualDevice
from curiosim.device.world import WorldModel
from curiosim.params import DEFAULT_PARAMS, RobotParams
from curiosim.transport.slot import FrameSlot

MODES = ("idle", "teleop", "track")


class ModeConflict(RuntimeError):
    """A mode change raced another one; retry or pick a different mode."""


class SimulatorService:
    """Real-time simulator: device thread, frame slot, mode arbitration.

    ``frame_interval`` is the camera period in simulated seconds; with
    the default tick of 0.01 s and interval 0.1 s the stream runs at
    10 frames per second of wall time.
    """

    def __init__(
        self,
        world: WorldModel,
        params: RobotParams = DEFAULT_PARAMS,
        dt: float = 0.01,
        frame_interval: float = 0.1,
    ):
        self._device = VirtualDevice(world, params, dt)
        self._publish_every = max(1, round(frame_interval / dt))
        self.slot = FrameSlot()
        self._commands: "queue.Queue[tuple[str, Future]]" = queue.Queue()
        self._stop = threading.Event()
        self._sim_thread: Optional[threading.Thread] = None

        self._state_lock = threading.Lock()
        self._config = PipelineConfig()
        self._mode = "idle"
        self._metrics: TrackingMetrics = ZERO_METRICS

        self._mode_change = threading.Lock()
        self._tracker: Optional[threading.Thread] = None
        self._tracker_stop = threading.Event()

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> "SimulatorService":
        self._sim_thread = threading.Thread(target=self._run, name="curio-sim", daemon=True)
        self._sim_thread.start()
        return self

    def stop(self) -> None:
        self._stop_tracker()
        self._stop.set()
        if self._sim_thread is not None:
            self._sim_thread.join(timeout=2.0)

    def _run(self) -> None:
        dt = self._device.dt
        next_t = time.monotonic()
        ticks = 0
        # Publish one frame immediately so clients never wait a full period.
        self.slot.publish(self._device.render())
        while not self._stop.is_set():
            while True:
                try:
                    line, future = self._commands.get_nowait()
                except queue.Empty:
                    break
                future.set_result(self._device.handle_line(line))
            self._device.tick()
            ticks += 1
            if ticks % self._publish_every == 0:
                self.slot.publish(self._device.render())
            next_t += dt
            delay = next_t - time.monotonic()
            if delay > 0:
                self._stop.wait(delay)
            elif delay < -1.0:
                next_t = time.monotonic()  # fell badly behind; resynchronize

    # -- command path ---------------------------------------------------------

    def submit_line(self, line: str, timeout: float = 2.0) -> str:
        """Execute one command line on the device thread; returns the reply."""
        future: Future = Future()
        self._commands.put((line, future))
        return future.result(timeout=timeout)

    # -- shared cells -----------------------------------------------------------

    def get_config(self) -> PipelineConfig:
        with self._state_lock:
            return self._config

    def set_config(self, config: PipelineConfig) -> None:
        with self._state_lock:
            self._config = config

    def get_metrics(self) -> TrackingMetrics:
        with self._state_lock:
            return self._metrics

    def _set_metrics(self, metrics: TrackingMetrics) -> None:
        with self._state_lock:
            self._metrics = metrics

    def get_mode(self) -> str:
        with self._state_lock:
            return self._mode

    def set_mode(self, mode: str) -> str:
        """Switch mode, managing the tracker thread; returns the new mode."""
        if mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")
        if not self._mode_change.acquire(timeout=1.0):
            raise ModeConflict("another mode change is in progress")
        try:
            if mode == self.get_mode():
                return mode
            self._stop_tracker()
            with self._state_lock:
                self._mode = mode
            if mode == "track":
                self._tracker_stop.clear()
                self._tracker = threading.Thread(
                    target=self._track_loop, name="curio-tracker", daemon=True
                )
                self._tracker.start()
            return mode
        finally:
            self._mode_change.release()

    def _stop_tracker(self) -> None:
        if self._tracker is not None:
            self._tracker_stop.set()
            self._tracker.join(timeout=2.0)
            self._tracker = None

    # -- track mode -------------------------------------------------------------

    def _track_loop(self) -> None:
        acc = TrackingAccumulator()
        gate = SendGate()
        start = time.monotonic()
        seq, _ = self.slot.latest()
        while not self._tracker_stop.is_set():
            got = self.slot.wait_newer(seq, timeout=0.25)
            if got is None:
                continue
            seq, frame = got
            config = self.get_config()  # read at loop top: live tuning
            det, cmd, center_err, in_deadband, _, _ = process_frame(frame, config)
            sent = False
            if gate.should_send(cmd):
                try:
                    self.submit_line(format_command(cmd))
                except Exception:
                    break  # device thread gone; service is shutting down
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
            self._set_metrics(acc.metrics())
