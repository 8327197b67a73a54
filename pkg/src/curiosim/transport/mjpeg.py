"""Camera-stream encoding: binary PGM frames in a multipart HTTP stream.

The stream mimics an IP-camera app: an unending HTTP response of type
``multipart/x-mixed-replace; boundary=curioframe`` whose parts each
carry one frame.  Parts are binary PGM (P5, maxval 255) rather than
JPEG so round-trips are bit-exact; the simulated timestamp rides in an
``X-Timestamp`` part header because PGM has no metadata field.

The reader is deliberately forgiving: malformed headers, boundary
mismatches, and truncated parts each produce a distinct diagnostic and
the reader resynchronizes at the next boundary marker.
"""

from __future__ import annotations

import http.client
from typing import Iterator, List, Optional, Tuple
from urllib.parse import urlsplit

import numpy as np

from curiosim.device.camera import Frame

BOUNDARY = "curioframe"
PGM_CONTENT_TYPE = "image/x-portable-graymap"

_HEADER_LIMIT = 16384
_READ_SIZE = 65536


# ---------------------------------------------------------------------------
# PGM
# ---------------------------------------------------------------------------

def encode_pgm(frame: Frame) -> bytes:
    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(frame.pixels).tobytes()


def decode_pgm(data: bytes) -> Tuple[int, int, np.ndarray]:
    """Decode binary PGM; ValueError on anything but our exact dialect."""
    if not data.startswith(b"P5"):
        raise ValueError("not a binary PGM (no P5 magic)")
    tokens: List[int] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        token = data[start:pos]
        if not token.isdigit():
            raise ValueError(f"bad PGM header token {token!r}")
        tokens.append(int(token))
    width, height, maxval = tokens
    if maxval != 255:
        raise ValueError(f"unsupported PGM maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    expected = width * height
    body = data[pos:]
    if len(body) != expected:
        raise ValueError(f"PGM body is {len(body)} bytes, expected {expected}")
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(height, width).copy()
    return width, height, pixels


# ---------------------------------------------------------------------------
# Multipart writing
# ---------------------------------------------------------------------------

def encode_part(frame: Frame, boundary: str = BOUNDARY) -> bytes:
    body = encode_pgm(frame)
    head = (
        f"--{boundary}\r\n"
        f"Content-Type: {PGM_CONTENT_TYPE}\r\n"
        f"Content-Length: {len(body)}\r\n"
        f"X-Timestamp: {frame.timestamp!r}\r\n"
        "\r\n"
    ).encode("ascii")
    return head + body + b"\r\n"


def stream_content_type(boundary: str = BOUNDARY) -> str:
    return f"multipart/x-mixed-replace; boundary={boundary}"


# ---------------------------------------------------------------------------
# Multipart reading
# ---------------------------------------------------------------------------

class MultipartReader:
    """Pull Frames out of a multipart byte stream, resyncing on damage.

    ``source`` is a file-like object (read1 preferred over read, so a
    live HTTP response streams without over-blocking; empty read means
    end of stream).  Recoverable faults are recorded on ``diagnostics``
    as (kind, message) pairs; kinds are ``malformed-header``,
    ``boundary-mismatch``, ``truncated-part``, ``unknown-content-type``
    and ``bad-pgm``.
    """

    def __init__(self, source, boundary: str = BOUNDARY):
        self._read = getattr(source, "read1", None) or source.read
        self._marker = b"--" + boundary.encode("ascii")
        self._buffer = bytearray()
        self._eof = False
        self.diagnostics: List[Tuple[str, str]] = []

    # -- buffered input ----------------------------------------------------

    def _fill_some(self) -> bool:
        """One read from the source; False when the stream has ended."""
        if self._eof:
            return False
        piece = self._read(_READ_SIZE)
        if not piece:
            self._eof = True
            return False
        self._buffer.extend(piece)
        return True

    def _fill(self, n: int) -> None:
        while len(self._buffer) < n and self._fill_some():
            pass

    def _read_exact(self, n: int) -> Optional[bytes]:
        self._fill(n)
        if len(self._buffer) < n:
            return None
        out = bytes(self._buffer[:n])
        del self._buffer[:n]
        return out

    def _scan_to_marker(self) -> Optional[int]:
        """Discard bytes until the buffer starts with the boundary marker.
        Returns how many bytes were skipped, or None at end of stream."""
        skipped = 0
        while True:
            i = self._buffer.find(self._marker)
            if i >= 0:
                skipped += i
                del self._buffer[:i]
                return skipped
            keep = len(self._marker) - 1
            if len(self._buffer) > keep:
                skipped += len(self._buffer) - keep
                del self._buffer[: len(self._buffer) - keep]
            if not self._fill_some():
                return None

    def _read_headers(self) -> Optional[dict]:
        searched = 0
        while True:
            scan_from = max(0, searched - 3)
            end = self._buffer.find(b"\r\n\r\n", scan_from)
            if end >= 0:
                break
            searched = len(self._buffer)
            if searched > _HEADER_LIMIT or not self._fill_some():
                return None
        block = bytes(self._buffer[:end])
        del self._buffer[: end + 4]
        headers: dict = {}
        for raw_line in block.split(b"\r\n"):
            if not raw_line:
                continue
            name, sep, value = raw_line.partition(b":")
            if not sep:
                return None
            headers[name.strip().lower().decode("latin-1")] = value.strip().decode("latin-1")
        return headers

    def _diag(self, kind: str, message: str) -> None:
        self.diagnostics.append((kind, message))

    # -- the stream --------------------------------------------------------

    def frames(self) -> Iterator[Frame]:
        first = True
        quiet_resync = False
        while True:
            skipped = self._scan_to_marker()
            if skipped is None:
                return
            if skipped > 0 and not first and not quiet_resync:
                self._diag("boundary-mismatch", f"skipped {skipped} bytes to next boundary")
            first = False
            quiet_resync = False
            del self._buffer[: len(self._marker)]

            self._fill(2)
            if self._buffer.startswith(b"--"):
                return  # closing terminator
            if self._buffer.startswith(b"\r\n"):
                del self._buffer[:2]
            else:
                self._diag("malformed-header", "boundary line not CRLF-terminated")
                quiet_resync = True
                continue

            headers = self._read_headers()
            if headers is None:
                self._diag("malformed-header", "part header block unterminated or unparsable")
                quiet_resync = True
                continue
            try:
                length = int(headers["content-length"])
                if length < 0:
                    raise ValueError
            except (KeyError, ValueError):
                self._diag("malformed-header", "missing or invalid Content-Length")
                quiet_resync = True
                continue

            body = self._read_exact(length)
            if body is None:
                self._diag("truncated-part", "stream ended inside a part body")
                return

            # The declared length must land exactly on the part framing:
            # a CRLF right after the body.  No CRLF means the length lied
            # and the body bytes cannot be trusted, so drop the part.
            self._fill(2)
            if not self._buffer.startswith(b"\r\n"):
                self._diag("truncated-part", "Content-Length does not match the part body")
                quiet_resync = True
                continue
            del self._buffer[:2]
            # Stray bytes between the CRLF and the next boundary do not
            # invalidate the part just read; note them, deliver the frame,
            # and let the next loop pass resync quietly.
            self._fill(len(self._marker))
            if not (self._buffer.startswith(self._marker) or len(self._buffer) == 0):
                self._diag("boundary-mismatch", "expected a boundary after the part body")
                quiet_resync = True

            content_type = headers.get("content-type", "")
            if content_type.split(";")[0].strip() != PGM_CONTENT_TYPE:
                self._diag("unknown-content-type", f"skipping part of type {content_type!r}")
                continue

            try:
                width, height, pixels = decode_pgm(body)
            except ValueError as exc:
                self._diag("bad-pgm", str(exc))
                continue
            try:
                timestamp = float(headers.get("x-timestamp", "0"))
            except ValueError:
                timestamp = 0.0
            yield Frame(width=width, height=height, pixels=pixels, timestamp=timestamp)


def parse_multipart(source, boundary: str = BOUNDARY) -> Iterator[Frame]:
    """Convenience wrapper: iterate Frames, dropping the diagnostics."""
    return MultipartReader(source, boundary).frames()


def open_multipart_url(url: str, timeout: float = 10.0):
    """GET a multipart stream; returns (MultipartReader, close callable).

    The boundary token is taken from the response Content-Type header.
    Raises ConnectionError when the endpoint is unreachable or does not
    serve a multipart stream.
    """
    parts = urlsplit(url)
    if parts.scheme != "http" or parts.hostname is None:
        raise ConnectionError(f"unsupported stream URL {url!r}")
    conn = http.client.HTTPConnection(parts.hostname, parts.port or 80, timeout=timeout)
    try:
        conn.request("GET", parts.path or "/", headers={"Accept": "*/*"})
        resp = conn.getresponse()
    except OSError as exc:
        conn.close()
        raise ConnectionError(f"cannot reach {url}: {exc}") from None
    if resp.status != 200:
        conn.close()
        raise ConnectionError(f"{url} answered HTTP {resp.status}")
    content_type = resp.getheader("Content-Type", "")
    boundary = BOUNDARY
    for piece in content_type.split(";"):
        piece = piece.strip()
        if piece.startswith("boundary="):
            boundary = piece[len("boundary=") :].strip('"')
    reader = MultipartReader(resp, boundary)
    return reader, conn.close
