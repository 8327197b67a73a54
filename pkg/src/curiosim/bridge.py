"""Bridge API: the HTTP + WebSocket surface the browser console uses.

Endpoints, all on one port:

* ``GET /stream``        multipart camera stream (see transport.mjpeg)
* ``GET /api/config``    current pipeline config as JSON
* ``PUT /api/config``    replace the config; 400 with a field-level
                         message on invalid JSON
* ``GET /api/metrics``   metrics of the current/last track session
* ``POST /api/mode``     ``{"mode": "idle"|"teleop"|"track"}``; 400 on
                         anything else, 409 when a change is racing
* ``WS /uart``           text frames carry command lines; replies are
                         the device responses without the newline.
                         Commands are accepted only in teleop mode —
                         anything else answers ``err Busy`` so the
                         tracking loop and manual control never
                         interleave.

The WebSocket side is a minimal RFC 6455 server: text/ping/close
frames, client-to-server masking required, no extensions.
"""

from __future__ import annotations

import base64
import hashlib
import json
import struct
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from curiosim.client.pipeline import ConfigError, PipelineConfig
from curiosim.device.service import ModeConflict, SimulatorService
from curiosim.transport.mjpeg import encode_part, stream_content_type

_WS_MAGIC = b"258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
}

_INDEX_FALLBACK = b"""<!doctype html>
<title>curiosim bridge</title>
<body style="font-family: sans-serif">
<h1>curiosim bridge</h1>
<p>Endpoints: <a href="/stream">/stream</a>,
<a href="/api/config">/api/config</a>,
<a href="/api/metrics">/api/metrics</a>, POST /api/mode, WS /uart.</p>
<p>Build the web console and pass its directory via --console-dir for a UI.</p>
"""


def _make_handler(service: SimulatorService, console_dir: Optional[str]):
    console_root = Path(console_dir).resolve() if console_dir else None

    class BridgeHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        # -- plumbing ----------------------------------------------------

        def log_message(self, fmt, *args):  # noqa: N802 - quiet by default
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload, sort_keys=True).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _read_body(self) -> bytes:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length) if length > 0 else b""

        # -- routes ------------------------------------------------------

        def do_GET(self):  # noqa: N802
            if self.path == "/uart":
                self._serve_websocket()
            elif self.path == "/stream":
                self._serve_stream()
            elif self.path == "/api/config":
                self._send_json(200, service.get_config().to_dict())
            elif self.path == "/api/metrics":
                payload = service.get_metrics().to_dict()
                payload["mode"] = service.get_mode()
                self._send_json(200, payload)
            else:
                self._serve_static()

        def do_PUT(self):  # noqa: N802
            if self.path != "/api/config":
                self._send_json(404, {"error": {"message": "no such endpoint"}})
                return
            try:
                config = PipelineConfig.from_json(self._read_body().decode("utf-8", "replace"))
            except ConfigError as exc:
                self._send_json(400, {"error": {"field": exc.field, "message": exc.reason}})
                return
            service.set_config(config)
            self._send_json(200, config.to_dict())

        def do_POST(self):  # noqa: N802
            if self.path != "/api/mode":
                self._send_json(404, {"error": {"message": "no such endpoint"}})
                return
            try:
                doc = json.loads(self._read_body().decode("utf-8", "replace"))
                mode = doc["mode"]
            except (ValueError, KeyError, TypeError):
                self._send_json(400, {"error": {"field": "mode", "message": "body must be {\"mode\": ...}"}})
                return
            try:
                applied = service.set_mode(mode)
            except ValueError as exc:
                self._send_json(400, {"error": {"field": "mode", "message": str(exc)}})
                return
            except ModeConflict as exc:
                self._send_json(409, {"error": {"field": "mode", "message": str(exc)}})
                return
            self._send_json(200, {"mode": applied})

        # -- camera stream -------------------------------------------------

        def _serve_stream(self) -> None:
            self.send_response(200)
            self.send_header("Content-Type", stream_content_type())
            self.send_header("Cache-Control", "no-store")
            self.send_header("Connection", "close")
            self.end_headers()
            self.close_connection = True
            seq = 0
            try:
                while True:
                    got = service.slot.wait_newer(seq, timeout=2.0)
                    if got is None:
                        continue
                    seq, frame = got
                    self.wfile.write(encode_part(frame))
                    self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError, OSError):
                return

        # -- static console ------------------------------------------------

        def _serve_static(self) -> None:
            path = self.path.split("?", 1)[0]
            if path in ("", "/"):
                path = "/index.html"
            if console_root is not None:
                candidate = (console_root / path.lstrip("/")).resolve()
                if candidate.is_file() and console_root in candidate.parents:
                    body = candidate.read_bytes()
                    ctype = _CONTENT_TYPES.get(candidate.suffix, "application/octet-stream")
                    self.send_response(200)
                    self.send_header("Content-Type", ctype)
                    self.send_header("Content-Length", str(len(body)))
                    self.end_headers()
                    self.wfile.write(body)
                    return
            if path == "/index.html":
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(_INDEX_FALLBACK)))
                self.end_headers()
                self.wfile.write(_INDEX_FALLBACK)
                return
            self._send_json(404, {"error": {"message": f"no such path {path!r}"}})

        # -- websocket ------------------------------------------------------

        def _serve_websocket(self) -> None:
            key = self.headers.get("Sec-WebSocket-Key")
            upgrade = (self.headers.get("Upgrade") or "").lower()
            if upgrade != "websocket" or not key:
                self._send_json(400, {"error": {"message": "expected a WebSocket upgrade"}})
                return
            accept = base64.b64encode(hashlib.sha1(key.encode("ascii") + _WS_MAGIC).digest())
            self.send_response(101)
            self.send_header("Upgrade", "websocket")
            self.send_header("Connection", "Upgrade")
            self.send_header("Sec-WebSocket-Accept", accept.decode("ascii"))
            self.end_headers()
            self.close_connection = True
            try:
                self._websocket_loop()
            except (BrokenPipeError, ConnectionResetError, OSError):
                return

        def _ws_read_exact(self, n: int) -> Optional[bytes]:
            data = self.rfile.read(n)
            return data if data is not None and len(data) == n else None

        def _ws_read_frame(self) -> Optional[tuple[int, bytes]]:
            head = self._ws_read_exact(2)
            if head is None:
                return None
            fin_opcode, mask_len = head
            opcode = fin_opcode & 0x0F
            masked = bool(mask_len & 0x80)
            length = mask_len & 0x7F
            if length == 126:
                ext = self._ws_read_exact(2)
                if ext is None:
                    return None
                length = struct.unpack(">H", ext)[0]
            elif length == 127:
                ext = self._ws_read_exact(8)
                if ext is None:
                    return None
                length = struct.unpack(">Q", ext)[0]
            if length > 1 << 20:
                return None  # nothing legitimate is this large here
            mask = b"\x00" * 4
            if masked:
                mask_bytes = self._ws_read_exact(4)
                if mask_bytes is None:
                    return None
                mask = mask_bytes
            payload = self._ws_read_exact(length) if length else b""
            if payload is None:
                return None
            if masked and length:
                payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
            return opcode, payload

        def _ws_send(self, opcode: int, payload: bytes) -> None:
            header = bytearray([0x80 | opcode])
            n = len(payload)
            if n < 126:
                header.append(n)
            elif n < 1 << 16:
                header.append(126)
                header += struct.pack(">H", n)
            else:
                header.append(127)
                header += struct.pack(">Q", n)
            self.wfile.write(bytes(header) + payload)
            self.wfile.flush()

        def _websocket_loop(self) -> None:
            while True:
                frame = self._ws_read_frame()
                if frame is None:
                    return
                opcode, payload = frame
                if opcode == 8:  # close
                    self._ws_send(8, payload[:2])
                    return
                if opcode == 9:  # ping
                    self._ws_send(10, payload)
                    continue
                if opcode != 1:  # only text carries commands
                    continue
                line = payload.decode("utf-8", "replace").strip("\r\n")
                if service.get_mode() != "teleop":
                    reply = "err Busy"
                else:
                    reply = service.submit_line(line).rstrip("\n")
                self._ws_send(1, reply.encode("utf-8"))

    return BridgeHandler


class BridgeServer:
    """The bridge HTTP server on its own threads."""

    def __init__(
        self,
        service: SimulatorService,
        host: str = "127.0.0.1",
        port: int = 0,
        console_dir: Optional[str] = None,
    ):
        handler = _make_handler(service, console_dir)
        self._httpd = ThreadingHTTPServer((host, port), handler)
        self._httpd.daemon_threads = True
        self.host, self.port = self._httpd.server_address[:2]
        self._thread: Optional[threading.Thread] = None

    def start(self) -> "BridgeServer":
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, name="curio-bridge", daemon=True
        )
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
