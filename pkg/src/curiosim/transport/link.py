"""The command link: a TCP stand-in for the BLE UART characteristic.

One client at a time, newline-terminated UTF-8 command lines in,
"ok\\n"/"err <kind>\\n" out.  ``LinkClient`` is the host side;
``LoopbackLink`` wires a client directly to a handler in-process for
tests, passing through the same MTU chunking and line framing as the
socket path.
"""

from __future__ import annotations

import socket
import threading
from collections import deque
from typing import Callable, Optional

from curiosim.transport.framing import FRAMING_ERROR, MTU, LineSplitter, chunk

FRAMING_RESPONSE = "err Malformed\n"


class LinkClosed(ConnectionError):
    """The peer went away (connect refused, reset, or clean close)."""


class DeviceLinkServer:
    """Serve the device command handler on a TCP port, one client at a time.

    ``handler`` takes one command line (newline stripped) and returns the
    response text; it must be safe to call from this server's thread.
    """

    def __init__(self, handler: Callable[[str], str], host: str = "127.0.0.1", port: int = 0):
        self._handler = handler
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(1)
        self._sock.settimeout(0.2)
        self.host, self.port = self._sock.getsockname()[:2]
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def start(self) -> "DeviceLinkServer":
        self._thread = threading.Thread(target=self._accept_loop, name="curio-link", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
        self._sock.close()

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                conn, _addr = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            with conn:
                self._serve_client(conn)

    def _serve_client(self, conn: socket.socket) -> None:
        conn.settimeout(0.2)
        splitter = LineSplitter()
        while not self._stop.is_set():
            try:
                data = conn.recv(4096)
            except socket.timeout:
                continue
            except OSError:
                return
            if not data:
                return
            try:
                for item in splitter.feed(data):
                    if item is FRAMING_ERROR:
                        conn.sendall(FRAMING_RESPONSE.encode("utf-8"))
                    else:
                        conn.sendall(self._handler(item).encode("utf-8"))
            except OSError:
                return


class LinkClient:
    """Host endpoint: writes commands in MTU-sized pieces, reads replies."""

    def __init__(self, sock: socket.socket, mtu: int = MTU):
        self._sock = sock
        self._mtu = mtu
        self._splitter = LineSplitter()
        self._lines: deque = deque()
        self._open = True

    @classmethod
    def connect(cls, host: str, port: int, timeout: float = 2.0, mtu: int = MTU) -> "LinkClient":
        try:
            sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise LinkClosed(f"cannot connect to {host}:{port}: {exc}") from None
        return cls(sock, mtu)

    def send_line(self, line: str) -> None:
        if not self._open:
            raise LinkClosed("link already closed")
        payload = (line + "\n").encode("utf-8")
        try:
            for piece in chunk(payload, self._mtu):
                self._sock.sendall(piece)
        except OSError as exc:
            self._open = False
            raise LinkClosed(f"send failed: {exc}") from None

    def read_line(self, timeout: float = 1.0) -> str:
        """Next response line; TimeoutError or LinkClosed otherwise."""
        while not self._lines:
            if not self._open:
                raise LinkClosed("link closed")
            self._sock.settimeout(timeout)
            try:
                data = self._sock.recv(4096)
            except socket.timeout:
                raise TimeoutError(f"no response within {timeout} s") from None
            except OSError as exc:
                self._open = False
                raise LinkClosed(f"receive failed: {exc}") from None
            if not data:
                self._open = False
                raise LinkClosed("device closed the link")
            for item in self._splitter.feed(data):
                if item is not FRAMING_ERROR:
                    self._lines.append(item)
        return self._lines.popleft()

    def close(self) -> None:
        self._open = False
        try:
            self._sock.close()
        except OSError:
            pass


class LoopbackLink:
    """In-memory link with the same interface as LinkClient.

    Outbound lines pass through chunk() and a LineSplitter before the
    handler sees them, so the framing path is identical to the wire.
    """

    def __init__(self, handler: Callable[[str], str], mtu: int = MTU):
        self._handler = handler
        self._mtu = mtu
        self._splitter = LineSplitter()
        self._replies: deque = deque()
        self._open = True

    def send_line(self, line: str) -> None:
        if not self._open:
            raise LinkClosed("link already closed")
        payload = (line + "\n").encode("utf-8")
        for piece in chunk(payload, self._mtu):
            for item in self._splitter.feed(piece):
                if item is FRAMING_ERROR:
                    self._replies.append(FRAMING_RESPONSE.rstrip("\n"))
                else:
                    self._replies.append(self._handler(item).rstrip("\n"))

    def read_line(self, timeout: float = 1.0) -> str:
        if not self._replies:
            if not self._open:
                raise LinkClosed("link closed")
            raise TimeoutError(f"no response within {timeout} s")
        return self._replies.popleft()

    def close(self) -> None:
        self._open = False
