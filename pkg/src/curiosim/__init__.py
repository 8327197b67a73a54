"""curiosim: a software twin of the Curio two-wheeled educational robot.

The package provides the pieces of the physical platform as importable
parts: the command language spoken over the BLE-UART link
(:mod:`curiosim.commands`), the virtual device with differential-drive
kinematics and a synthetic smartphone camera (:mod:`curiosim.device`),
the byte-stream transport emulation (:mod:`curiosim.transport`), the
host-side client with the configurable target-tracking pipeline
(:mod:`curiosim.client`), and the operator CLI plus the browser bridge
(:mod:`curiosim.cli`, :mod:`curiosim.bridge`).
"""

__version__ = "0.1.0"

from curiosim.commands import Go, ParseError, Stop, format_command, parse
from curiosim.params import Pose, RobotParams

__all__ = [
    "Go",
    "Stop",
    "ParseError",
    "parse",
    "format_command",
    "Pose",
    "RobotParams",
    "__version__",
]
