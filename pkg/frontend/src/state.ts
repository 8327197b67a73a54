/** Console state: one plain object, pure transitions, derived flags.
 *
 * Every event funnels through reduce() so the UI invariants (controls
 * freeze when the link is lost, the pad only works in teleop) hold by
 * construction rather than by scattered if-statements.
 */

import type { LinkStatus, MetricsPayload, Mode, PipelineConfig } from "./types.js";

export interface ConsoleState {
  mode: Mode;
  /** Last server-confirmed config; never an optimistic local edit. */
  config: PipelineConfig | null;
  linkStatus: LinkStatus;
  lastMetrics: MetricsPayload | null;
  streamFps: number;
  /** Latest device reply or inline rejection to show next to the pad. */
  lastReply: string;
}

export const INITIAL_STATE: ConsoleState = {
  mode: "idle",
  config: null,
  linkStatus: "lost",
  lastMetrics: null,
  streamFps: 0,
  lastReply: "",
};

export type ConsoleEvent =
  | { kind: "link"; status: LinkStatus }
  | { kind: "mode"; mode: Mode }
  | { kind: "config"; config: PipelineConfig }
  | { kind: "metrics"; metrics: MetricsPayload }
  | { kind: "stream-fps"; fps: number }
  | { kind: "reply"; text: string };

export function reduce(state: ConsoleState, event: ConsoleEvent): ConsoleState {
  switch (event.kind) {
    case "link":
      return { ...state, linkStatus: event.status };
    case "mode":
      return { ...state, mode: event.mode };
    case "config":
      return { ...state, config: event.config };
    case "metrics":
      // the bridge's metrics payload carries the authoritative mode
      return { ...state, lastMetrics: event.metrics, mode: event.metrics.mode };
    case "stream-fps":
      return { ...state, streamFps: event.fps };
    case "reply":
      return { ...state, lastReply: event.text };
  }
}

export function controlsEnabled(state: ConsoleState): boolean {
  return state.linkStatus === "connected";
}

export function teleopEnabled(state: ConsoleState): boolean {
  return controlsEnabled(state) && state.mode === "teleop";
}

export function bannerVisible(state: ConsoleState): boolean {
  return state.linkStatus === "lost";
}
