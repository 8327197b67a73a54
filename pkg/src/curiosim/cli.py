"""Operator entry point: ``curiosim sim|track|bench``.

Exit codes: 0 success, 2 bad input (flags, world or config files),
3 connectivity (cannot reach or bind endpoints), 4 session error
(link lost or frames starved mid-run).  ``CURIO_SEED`` overrides the
``--seed`` flag of track and bench.
"""

from __future__ import annotations

import argparse
import os
import signal
import sys
import threading
from typing import Optional

from curiosim.bridge import BridgeServer
from curiosim.client.connection import ClientConnection, ClientError, Unreachable, HandshakeError
from curiosim.client.pipeline import ConfigError, PipelineConfig
from curiosim.client.session import (
    SessionReport,
    grid_csv,
    report_json,
    run_grid,
    run_session,
)
from curiosim.client.tracking import FramePump, FrameStarvation, TrackingAccumulator, track
from curiosim.device.core import DT_MAX, DT_MIN
from curiosim.device.service import SimulatorService
from curiosim.device.world import WorldError, resolve_world
from curiosim.transport.link import DeviceLinkServer
from curiosim.transport.mjpeg import open_multipart_url

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_CONNECTIVITY = 3
EXIT_SESSION = 4


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str) -> "_CliError":
    return _CliError(code, message)


def _resolve_seed(flag_value: int) -> int:
    env = os.environ.get("CURIO_SEED")
    if env is None:
        return flag_value
    try:
        return int(env)
    except ValueError:
        raise _fail(EXIT_BAD_INPUT, f"CURIO_SEED must be an integer, got {env!r}") from None


def _load_world(spec: str):
    try:
        return resolve_world(spec)
    except WorldError as exc:
        raise _fail(EXIT_BAD_INPUT, f"world {spec!r}: {exc}") from None


def _load_config(path: Optional[str]) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _fail(EXIT_BAD_INPUT, f"config {path!r}: cannot read: {exc}") from None
    try:
        return PipelineConfig.from_json(text)
    except ConfigError as exc:
        raise _fail(EXIT_BAD_INPUT, f"config {path!r}: {exc}") from None


# ---------------------------------------------------------------------------
# sim
# ---------------------------------------------------------------------------

def cmd_sim(args) -> int:
    if not (DT_MIN <= args.dt <= DT_MAX):
        raise _fail(EXIT_BAD_INPUT, f"--dt must be in [{DT_MIN}, {DT_MAX}], got {args.dt}")
    world_id, world = _load_world(args.world)

    service = SimulatorService(world, dt=args.dt)
    try:
        link = DeviceLinkServer(service.submit_line, port=args.tcp_port)
    except OSError as exc:
        raise _fail(EXIT_CONNECTIVITY, f"cannot bind device link on port {args.tcp_port}: {exc}") from None
    try:
        bridge = BridgeServer(service, port=args.http_port, console_dir=args.console_dir)
    except OSError as exc:
        link.stop()
        raise _fail(EXIT_CONNECTIVITY, f"cannot bind bridge on port {args.http_port}: {exc}") from None

    service.start()
    link.start()
    bridge.start()
    print(f"world: {world_id}")
    print(f"device-link: tcp 127.0.0.1:{link.port}")
    print(f"bridge: http://127.0.0.1:{bridge.port}")
    print(f"stream: http://127.0.0.1:{bridge.port}/stream")
    sys.stdout.flush()

    stop = threading.Event()

    def _on_signal(_signum, _frame):
        stop.set()

    signal.signal(signal.SIGINT, _on_signal)
    signal.signal(signal.SIGTERM, _on_signal)
    try:
        while not stop.wait(0.2):
            pass
    finally:
        bridge.stop()
        link.stop()
        service.stop()
    return EXIT_OK


# ---------------------------------------------------------------------------
# track
# ---------------------------------------------------------------------------

def _write_report(report: SessionReport, out_path: Optional[str]) -> None:
    text = report_json(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    metrics = report.metrics
    print(f"world: {report.world_id}  seed: {report.seed}")
    print(f"frames_processed: {metrics.frames_processed}")
    print(f"commands_sent: {metrics.commands_sent}")
    print(f"visibility_fraction: {metrics.visibility_fraction!r}")
    print(f"mean_abs_center_err: {metrics.mean_abs_center_err!r}")
    print(f"convergence_time: {metrics.convergence_time!r}")
    if out_path:
        print(f"report: {out_path}")


def cmd_track(args) -> int:
    seed = _resolve_seed(args.seed)
    config = _load_config(args.config)
    if args.duration < 0:
        raise _fail(EXIT_BAD_INPUT, f"--duration must be >= 0, got {args.duration}")

    if (args.device is None) != (args.camera is None):
        raise _fail(EXIT_BAD_INPUT, "live mode needs both --device and --camera")

    if args.device is None:
        world_id, world = _load_world(args.world)
        report, _records = run_session(
            world, config, args.duration, seed=seed, world_id=world_id
        )
        _write_report(report, args.out)
        return EXIT_OK

    # Live mode: real TCP link and multipart stream.
    try:
        conn = ClientConnection.connect(args.device)
    except (Unreachable, HandshakeError) as exc:
        raise _fail(EXIT_CONNECTIVITY, f"device {args.device}: {exc}") from None
    try:
        reader, close_stream = open_multipart_url(args.camera)
    except ConnectionError as exc:
        conn.close()
        raise _fail(EXIT_CONNECTIVITY, f"camera {args.camera}: {exc}") from None

    pump = FramePump(reader.frames()).start()
    try:
        metrics = track(conn, pump.slot, config, args.duration)
    except FrameStarvation as exc:
        raise _fail(EXIT_SESSION, f"camera {args.camera}: {exc}") from None
    except ClientError as exc:
        raise _fail(EXIT_SESSION, f"device {args.device}: {exc}") from None
    finally:
        close_stream()
        conn.close()
    report = SessionReport(config=config, metrics=metrics, world_id="live", seed=seed)
    _write_report(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.duration <= 0:
        raise _fail(EXIT_BAD_INPUT, f"--duration must be > 0, got {args.duration}")
    world_id, world = _load_world(args.world)

    def progress(done: int, total: int) -> None:
        if done % 27 == 0 or done == total:
            print(f"bench: {done}/{total} configs", file=sys.stderr)

    rows = run_grid(world, args.duration, seed=seed, world_id=world_id, progress=progress)
    text = grid_csv(rows)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    failed = sum(1 for _, metrics, _ in rows if metrics is None)
    print(f"grid: {len(rows)} rows ({failed} failed) -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curiosim",
        description="Software twin of the Curio robot: simulator, tracker, benchmark grid.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("sim", help="run the live simulator (device link + bridge API)")
    p_sim.add_argument("--world", default="standard", help="built-in world name or JSON file")
    p_sim.add_argument("--tcp-port", type=int, default=8766, help="device command link port (0 = ephemeral)")
    p_sim.add_argument("--http-port", type=int, default=8765, help="bridge/stream port (0 = ephemeral)")
    p_sim.add_argument("--dt", type=float, default=0.01, help="device timestep in seconds")
    p_sim.add_argument("--console-dir", default=None, help="serve this directory at / (built web console)")
    p_sim.set_defaults(func=cmd_sim)

    p_track = sub.add_parser("track", help="run one tracking session and write a report")
    p_track.add_argument("--world", default="standard", help="built-in world name or JSON file (in-process mode)")
    p_track.add_argument("--device", default=None, help="host:port of a live device link")
    p_track.add_argument("--camera", default=None, help="URL of a live multipart frame stream")
    p_track.add_argument("--config", default=None, help="pipeline config JSON file")
    p_track.add_argument("--duration", type=float, default=10.0, help="session length in seconds")
    p_track.add_argument("--out", default=None, help="write the session report JSON here")
    p_track.add_argument("--seed", type=int, default=0, help="session seed (CURIO_SEED overrides)")
    p_track.set_defaults(func=cmd_track)

    p_bench = sub.add_parser("bench", help="run all 243 pipeline configs and write a CSV grid")
    p_bench.add_argument("--world", default="standard", help="built-in world name or JSON file")
    p_bench.add_argument("--duration", type=float, default=10.0, help="session length per config")
    p_bench.add_argument("--out", default="grid.csv", help="output CSV path")
    p_bench.add_argument("--seed", type=int, default=0, help="grid seed (CURIO_SEED overrides)")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except KeyboardInterrupt:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
