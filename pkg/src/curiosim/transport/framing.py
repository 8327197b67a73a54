"""Byte-level framing of the UART-style command link.

The link carries newline-terminated UTF-8 command lines, but the radio
delivers them in MTU-sized chunks (20 bytes by default, the classic BLE
payload).  ``chunk``/``reassemble`` are the MTU layer; ``LineSplitter``
recovers command lines from any chunking of the byte stream and flags
lines that exceed the 256-byte command bound.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Union

MTU = 20
MAX_LINE_BYTES = 256


def chunk(payload: bytes, mtu: int = MTU) -> List[bytes]:
    """Split ``payload`` into mtu-sized pieces; all full except the last."""
    if mtu < 1:
        raise ValueError("mtu must be >= 1")
    return [payload[i : i + mtu] for i in range(0, len(payload), mtu)]


def reassemble(chunks: Iterable[bytes]) -> bytes:
    return b"".join(chunks)


class _FramingError:
    """Marker yielded in place of a line that exceeded MAX_LINE_BYTES."""

    def __repr__(self) -> str:  # pragma: no cover
        return "FRAMING_ERROR"


FRAMING_ERROR = _FramingError()

Line = Union[str, _FramingError]


class LineSplitter:
    """Incremental line framer, insensitive to how bytes are chunked.

    Feed arbitrary byte pieces; complete newline-terminated lines come
    out with the newline stripped.  A line longer than MAX_LINE_BYTES
    yields FRAMING_ERROR once and is discarded up to its newline.
    """

    def __init__(self) -> None:
        self._buffer = bytearray()
        self._discarding = False

    def feed(self, data: bytes) -> List[Line]:
        out: List[Line] = []
        self._buffer.extend(data)
        while True:
            newline = self._buffer.find(b"\n")
            if newline < 0:
                if self._discarding:
                    self._buffer.clear()
                elif len(self._buffer) > MAX_LINE_BYTES:
                    out.append(FRAMING_ERROR)
                    self._discarding = True
                    self._buffer.clear()
                return out
            raw = self._buffer[:newline]
            del self._buffer[: newline + 1]
            if self._discarding:
                self._discarding = False
                continue
            if len(raw) > MAX_LINE_BYTES:
                out.append(FRAMING_ERROR)
                continue
            out.append(raw.decode("utf-8", errors="replace"))


def split_lines(stream: Iterable[bytes]) -> Iterator[Line]:
    """Line-frame an iterable of byte pieces (see LineSplitter)."""
    splitter = LineSplitter()
    for piece in stream:
        yield from splitter.feed(piece)
