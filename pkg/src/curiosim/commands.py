"""The device command language: a fixed function-call grammar over integers.

The wire protocol is a single newline-terminated command per line; this
module handles the text after line framing has stripped the newline.
Two functions exist: ``go(left_steps, right_steps[, speed])`` which loads
both stepper motors, and ``stop()`` which halts them.  Anything else is
rejected with a structured :class:`ParseError` carrying the byte offset
of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from curiosim.params import MAX_ABS_STEPS, MAX_PROTOCOL_SPEED, MIN_SPEED, RobotParams

MAX_COMMAND_BYTES = 256

# ParseError kinds
UNKNOWN_FUNCTION = "UnknownFunction"
BAD_ARITY = "BadArity"
BAD_ARGUMENT = "BadArgument"
MALFORMED = "Malformed"


class ParseError(ValueError):
    """A rejected command, with the error kind and byte offset."""

    def __init__(self, kind: str, position: int, message: str):
        super().__init__(f"{kind} at {position}: {message}")
        self.kind = kind
        self.position = position
        self.message = message


@dataclass(frozen=True)
class Go:
    """Motion command: signed step counts per wheel, optional speed."""

    left_steps: int
    right_steps: int
    speed: Optional[int] = None


@dataclass(frozen=True)
class Stop:
    """Immediate halt of both motors."""


Command = Union[Go, Stop]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"-?[0-9]+")
_WS = re.compile(r"[ \t]*")


def _skip_ws(text: str, pos: int) -> int:
    return _WS.match(text, pos).end()


def parse(text: str) -> Command:
    """Parse one command line into :class:`Go` or :class:`Stop`.

    Whitespace is allowed around parentheses and after commas.  Raises
    :class:`ParseError` (and nothing else) on any invalid input.
    """
    if len(text.encode("utf-8", errors="replace")) > MAX_COMMAND_BYTES:
        raise ParseError(MALFORMED, 0, "command longer than 256 bytes")

    pos = _skip_ws(text, 0)
    m = _IDENT.match(text, pos)
    if m is None:
        raise ParseError(MALFORMED, pos, "expected a function name")
    name = m.group()
    name_pos = pos
    if name not in ("go", "stop"):
        raise ParseError(UNKNOWN_FUNCTION, name_pos, f"unknown function {name!r}")
    pos = _skip_ws(text, m.end())

    if pos >= len(text) or text[pos] != "(":
        raise ParseError(MALFORMED, pos, "expected '('")
    pos = _skip_ws(text, pos + 1)

    args: list[int] = []
    arg_positions: list[int] = []
    if pos < len(text) and text[pos] == ")":
        pos += 1
    else:
        while True:
            am = _INT.match(text, pos)
            if am is None:
                raise ParseError(BAD_ARGUMENT, pos, "expected an integer argument")
            args.append(int(am.group()))
            arg_positions.append(pos)
            pos = _skip_ws(text, am.end())
            if pos < len(text) and text[pos] == ",":
                pos = _skip_ws(text, pos + 1)
                continue
            if pos < len(text) and text[pos] == ")":
                pos += 1
                break
            raise ParseError(MALFORMED, pos, "expected ',' or ')'")

    tail = _skip_ws(text, pos)
    if tail != len(text):
        raise ParseError(MALFORMED, tail, "trailing input after command")

    if name == "stop":
        if args:
            raise ParseError(BAD_ARITY, arg_positions[0], "stop() takes no arguments")
        return Stop()

    if len(args) not in (2, 3):
        raise ParseError(BAD_ARITY, name_pos, f"go() takes 2 or 3 arguments, got {len(args)}")
    left, right = args[0], args[1]
    for value, vpos, field in ((left, arg_positions[0], "left_steps"), (right, arg_positions[1], "right_steps")):
        if abs(value) > MAX_ABS_STEPS:
            raise ParseError(BAD_ARGUMENT, vpos, f"{field} out of range")
    speed: Optional[int] = None
    if len(args) == 3:
        speed = args[2]
        if not (MIN_SPEED <= speed <= MAX_PROTOCOL_SPEED):
            raise ParseError(BAD_ARGUMENT, arg_positions[2], "speed out of range")
    return Go(left, right, speed)


def format_command(cmd: Command) -> str:
    """Canonical text form, no spaces; ``parse(format_command(c)) == c``."""
    if isinstance(cmd, Stop):
        return "stop()"
    if cmd.speed is None:
        return f"go({cmd.left_steps},{cmd.right_steps})"
    return f"go({cmd.left_steps},{cmd.right_steps},{cmd.speed})"


def validate(cmd: Command, limits: RobotParams) -> None:
    """Check a parsed command against a specific robot's limits.

    Raises :class:`ParseError` with kind ``BadArgument`` naming the
    offending field; returns None when the command is acceptable.
    """
    if isinstance(cmd, Stop):
        return
    if abs(cmd.left_steps) > MAX_ABS_STEPS:
        raise ParseError(BAD_ARGUMENT, 0, "left_steps out of range")
    if abs(cmd.right_steps) > MAX_ABS_STEPS:
        raise ParseError(BAD_ARGUMENT, 0, "right_steps out of range")
    if cmd.speed is not None and not (MIN_SPEED <= cmd.speed <= limits.max_speed):
        raise ParseError(BAD_ARGUMENT, 0, f"speed out of range (max {limits.max_speed})")
