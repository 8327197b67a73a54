"""Latest-value frame slot: one writer, many readers, no queue."""

from __future__ import annotations

import threading
from typing import Optional, Tuple

from curiosim.device.camera import Frame


class FrameSlot:
    """Holds only the newest frame; slow readers miss frames, never lag.

    ``publish`` bumps a sequence number; readers poll ``latest`` or block
    in ``wait_newer`` until something newer than their last sequence
    number arrives.
    """

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._seq = 0
        self._frame: Optional[Frame] = None

    def publish(self, frame: Frame) -> None:
        with self._cond:
            self._frame = frame
            self._seq += 1
            self._cond.notify_all()

    def latest(self) -> Tuple[int, Optional[Frame]]:
        with self._cond:
            return self._seq, self._frame

    def wait_newer(self, seq: int, timeout: float) -> Optional[Tuple[int, Frame]]:
        """Block until a frame newer than ``seq`` exists; None on timeout."""
        with self._cond:
            if not self._cond.wait_for(lambda: self._seq > seq, timeout):
                return None
            assert self._frame is not None
            return self._seq, self._frame
