/** Shared shapes mirrored from the bridge API. */

export type Rotation = "none" | "cw90" | "cw180";
export type Enhance = "identity" | "brighten" | "stretch";
export type Confidence = "low" | "medium" | "high";
export type Margins = "tight" | "medium" | "wide";
export type Response = "slow" | "medium" | "fast";

export interface PipelineConfig {
  rotation: Rotation;
  enhance: Enhance;
  confidence: Confidence;
  margins: Margins;
  response: Response;
}

export const CONFIG_OPTIONS: { [K in keyof PipelineConfig]: readonly PipelineConfig[K][] } = {
  rotation: ["none", "cw90", "cw180"],
  enhance: ["identity", "brighten", "stretch"],
  confidence: ["low", "medium", "high"],
  margins: ["tight", "medium", "wide"],
  response: ["slow", "medium", "fast"],
};

export type Mode = "idle" | "teleop" | "track";

export interface TrackingMetrics {
  visibility_fraction: number;
  mean_abs_center_err: number;
  convergence_time: number | null;
  commands_sent: number;
  frames_processed: number;
}

export interface MetricsPayload extends TrackingMetrics {
  mode: Mode;
}

/** Per-field rejection from PUT /api/config or POST /api/mode. */
export interface FieldError {
  field: string;
  message: string;
}

export type LinkStatus = "connected" | "lost";
