"""Device connection: probe handshake, serialized command sends."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from curiosim.commands import Command, Stop, format_command
from curiosim.transport.link import LinkClient, LinkClosed

CONNECT_TIMEOUT = 2.0
ACK_TIMEOUT = 1.0


class ClientError(Exception):
    """Base of every failure the SDK surfaces."""


class Unreachable(ClientError):
    pass


class HandshakeError(ClientError):
    pass


class AckTimeout(ClientError):
    pass


class LinkLost(ClientError):
    pass


class DeviceError(ClientError):
    """The device answered "err <kind>"; ``kind`` carries the kind."""

    def __init__(self, kind: str):
        super().__init__(f"device answered err {kind}")
        self.kind = kind


@dataclass
class LinkStats:
    commands_sent: int = 0
    errors: int = 0


class ClientConnection:
    """One command link with at most one unacknowledged command.

    Works over any transport exposing send_line/read_line/close (the
    TCP LinkClient or an in-process LoopbackLink).
    """

    def __init__(self, transport):
        self._transport = transport
        self.stats = LinkStats()

    @classmethod
    def connect(cls, address: str, timeout: float = CONNECT_TIMEOUT) -> "ClientConnection":
        """Dial host:port and probe the device with a stop() round-trip."""
        host, sep, port_text = address.rpartition(":")
        if not sep or not port_text.isdigit():
            raise Unreachable(f"address must be host:port, got {address!r}")
        try:
            transport = LinkClient.connect(host or "127.0.0.1", int(port_text), timeout=timeout)
        except LinkClosed as exc:
            raise Unreachable(str(exc)) from None
        conn = cls(transport)
        try:
            conn.send_command(Stop(), timeout=timeout)
        except DeviceError as exc:
            conn.close()
            raise HandshakeError(f"probe rejected: {exc}") from None
        except AckTimeout:
            conn.close()
            raise HandshakeError(f"no probe answer within {timeout} s") from None
        except LinkLost:
            conn.close()
            raise Unreachable(f"link dropped during handshake to {address}") from None
        return conn

    def send_command(self, cmd: Command, timeout: float = ACK_TIMEOUT) -> str:
        """Write one command, wait for its ack line; returns "ok"."""
        line = format_command(cmd)
        try:
            self._transport.send_line(line)
            reply = self._transport.read_line(timeout=timeout)
        except LinkClosed as exc:
            self.stats.errors += 1
            raise LinkLost(str(exc)) from None
        except TimeoutError:
            self.stats.errors += 1
            raise AckTimeout(f"no ack for {line!r} within {timeout} s") from None
        reply = reply.strip()
        if reply == "ok":
            self.stats.commands_sent += 1
            return reply
        self.stats.errors += 1
        if reply.startswith("err "):
            raise DeviceError(reply[4:])
        raise DeviceError(f"unexpected reply {reply!r}")

    # The operation name used throughout the docs:
    send_move = send_command

    def close(self) -> None:
        self._transport.close()
