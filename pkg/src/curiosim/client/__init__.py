"""Host-side SDK: connection, tracking pipeline, session runners."""

from curiosim.client.connection import (
    AckTimeout,
    ClientConnection,
    ClientError,
    DeviceError,
    HandshakeError,
    LinkLost,
    Unreachable,
)
from curiosim.client.pipeline import (
    CONFIDENCE_THRESHOLDS,
    DEADBAND_FRACTION,
    MARGIN_SHRINK,
    RESPONSE_TABLE,
    ConfigError,
    Detection,
    PipelineConfig,
    decide,
    detect,
    preprocess,
)
from curiosim.client.tracking import FrameRecord, TrackingAccumulator, TrackingMetrics, track
from curiosim.client.session import (
    SessionReport,
    all_configs,
    grid_csv,
    report_json,
    run_session,
)

__all__ = [
    "AckTimeout",
    "CONFIDENCE_THRESHOLDS",
    "ClientConnection",
    "ClientError",
    "ConfigError",
    "DEADBAND_FRACTION",
    "DeviceError",
    "Detection",
    "FrameRecord",
    "HandshakeError",
    "LinkLost",
    "MARGIN_SHRINK",
    "PipelineConfig",
    "RESPONSE_TABLE",
    "SessionReport",
    "TrackingAccumulator",
    "TrackingMetrics",
    "Unreachable",
    "all_configs",
    "decide",
    "detect",
    "grid_csv",
    "preprocess",
    "report_json",
    "run_session",
    "track",
]
