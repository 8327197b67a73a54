"""Headless deterministic simulation loop fed by timed command bytes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from curiosim.device.core import VirtualDevice
from curiosim.device.world import WorldModel
from curiosim.params import DEFAULT_PARAMS, Pose, RobotParams
from curiosim.transport.framing import FRAMING_ERROR, LineSplitter


@dataclass(frozen=True)
class TracePoint:
    clock: float
    pose: Pose
    responses: tuple[str, ...]


def run(
    world: WorldModel,
    params: RobotParams = DEFAULT_PARAMS,
    command_source: Iterable[tuple[float, bytes]] = (),
    dt: float = 0.01,
    duration: float = 1.0,
) -> list[TracePoint]:
    """Run the device for ``duration`` seconds with timed command bytes.

    ``command_source`` yields (time, bytes) events in nondecreasing time
    order; bytes are line-split exactly as the wire would deliver them
    and consumed between ticks.  The trace holds one point per tick;
    identical inputs give identical traces.
    """
    device = VirtualDevice(world, params, dt)
    splitter = LineSplitter()
    events = list(command_source)
    trace: list[TracePoint] = []
    n_ticks = round(duration / dt)
    next_event = 0

    for _ in range(n_ticks):
        responses: list[str] = []
        while next_event < len(events) and events[next_event][0] <= device.clock:
            for item in splitter.feed(events[next_event][1]):
                if item is FRAMING_ERROR:
                    responses.append("err Malformed\n")
                else:
                    responses.append(device.handle_line(item))
            next_event += 1
        device.tick()
        trace.append(TracePoint(device.clock, device.pose, tuple(responses)))
    return trace
