"""The virtual device: command execution on a fixed-timestep clock."""

from __future__ import annotations

from curiosim.commands import Command, Go, ParseError, Stop, parse, validate
from curiosim.device.camera import Frame, render_frame
from curiosim.device.motion import MotorState, pose_delta
from curiosim.device.world import WorldModel
from curiosim.params import DEFAULT_PARAMS, RobotParams

DT_MIN = 1e-4
DT_MAX = 0.1

OK_RESPONSE = "ok\n"


class VirtualDevice:
    """Software twin of the robot: motors, pose, clock, camera.

    Single-threaded by design; one owner advances the clock and feeds
    command lines.  Wrap it in a service for concurrent access.
    """

    def __init__(self, world: WorldModel, params: RobotParams = DEFAULT_PARAMS, dt: float = 0.01):
        if not (DT_MIN <= dt <= DT_MAX):
            raise ValueError(f"dt must be in [{DT_MIN}, {DT_MAX}], got {dt}")
        self.world = world
        self.params = params
        self.dt = dt
        self.pose = world.robot_start
        self.clock = 0.0
        self.left = MotorState(speed=params.default_speed)
        self.right = MotorState(speed=params.default_speed)
        self.last_response = ""

    # -- command path ------------------------------------------------------

    def exec(self, ast: Command) -> str:
        """Apply a validated command; a new go() preempts in-flight motion."""
        if isinstance(ast, Stop):
            self.left.halt()
            self.right.halt()
        else:
            speed = ast.speed if ast.speed is not None else self.params.default_speed
            self.left.load(ast.left_steps, speed)
            self.right.load(ast.right_steps, speed)
        self.last_response = OK_RESPONSE
        return OK_RESPONSE

    def handle_line(self, line: str) -> str:
        """Full wire path for one command line (newline already stripped):
        parse, validate against this robot's limits, execute."""
        try:
            ast = parse(line)
            validate(ast, self.params)
        except ParseError as err:
            self.last_response = f"err {err.kind}\n"
            return self.last_response
        return self.exec(ast)

    # -- time --------------------------------------------------------------

    def tick(self, dt: float | None = None) -> None:
        """Advance one timestep: run both motors, integrate the pose.

        The closed-form arc is exact only while both step rates hold, so
        the interval is split wherever a motor runs out of steps.  That
        makes the trajectory independent of how time is cut into ticks:
        any partition of the same span visits the same arc segments.
        """
        step = self.dt if dt is None else dt
        left_dt = step
        while left_dt > 0.0:
            seg = min(
                left_dt,
                self.left.seconds_to_finish(),
                self.right.seconds_to_finish(),
            )
            dl = self.left.consume(seg)
            dr = self.right.consume(seg)
            if dl == 0.0 and dr == 0.0:
                break  # both idle; nothing changes for the rest of the tick
            self.pose = pose_delta(self.params, dl, dr, self.pose)
            left_dt -= seg
        self.clock += step

    def advance(self, duration: float) -> None:
        """Run whole ticks covering ``duration`` (rounded to tick count)."""
        n = round(duration / self.dt)
        for _ in range(n):
            self.tick()

    @property
    def moving(self) -> bool:
        return self.left.moving or self.right.moving

    # -- camera ------------------------------------------------------------

    def render(self) -> Frame:
        return render_frame(self.world, self.pose, self.clock)
