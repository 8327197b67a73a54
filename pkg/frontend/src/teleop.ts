/** Teleop decision table: direction plus response option to a canonical
 * command line.  The table mirrors the tracker's response rows
 * (turn steps, forward steps, speed) so a console press moves the robot
 * exactly as hard as the tracking loop would.
 */

import type { Response } from "./types.js";

export type Direction = "forward" | "back" | "left" | "right";

// response -> [turn_steps, forward_steps, speed]
export const RESPONSE_TABLE: Record<Response, readonly [number, number, number]> = {
  slow: [50, 100, 300],
  medium: [100, 200, 600],
  fast: [200, 400, 1200],
};

/** Canonical form, identical to the device formatter: no spaces. */
export function formatGo(left: number, right: number, speed: number): string {
  if (![left, right, speed].every(Number.isInteger)) {
    throw new Error("go() takes integers");
  }
  return `go(${left},${right},${speed})`;
}

export function teleopCommand(direction: Direction, response: Response): string {
  const [turn, forward, speed] = RESPONSE_TABLE[response];
  switch (direction) {
    case "forward":
      return formatGo(forward, forward, speed);
    case "back":
      return formatGo(-forward, -forward, speed);
    case "left":
      return formatGo(-turn, turn, speed);
    case "right":
      return formatGo(turn, -turn, speed);
  }
}

export const STOP_COMMAND = "stop()";

/** Arrow keys drive the pad; anything else is ignored. */
export function keyToDirection(key: string): Direction | null {
  switch (key) {
    case "ArrowUp":
      return "forward";
    case "ArrowDown":
      return "back";
    case "ArrowLeft":
      return "left";
    case "ArrowRight":
      return "right";
    default:
      return null;
  }
}
