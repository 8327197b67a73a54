/** Thin typed client for the bridge's JSON endpoints. */

import type { FieldError, Mode, MetricsPayload, PipelineConfig } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly fieldError: FieldError | null,
    message: string,
  ) {
    super(message);
  }
}

async function readFieldError(resp: Response): Promise<FieldError | null> {
  try {
    const body = (await resp.json()) as { error?: FieldError };
    return body.error ?? null;
  } catch {
    return null;
  }
}

export class BridgeApi {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      const fieldError = await readFieldError(resp);
      const detail = fieldError ? `${fieldError.field}: ${fieldError.message}` : resp.statusText;
      throw new ApiError(resp.status, fieldError, `${path} -> ${resp.status} ${detail}`);
    }
    return (await resp.json()) as T;
  }

  getConfig(): Promise<PipelineConfig> {
    return this.request("/api/config");
  }

  /** Partial update; the bridge merges and answers the full config. */
  putConfig(patch: Partial<PipelineConfig>): Promise<PipelineConfig> {
    return this.request("/api/config", {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(patch),
    });
  }

  getMetrics(): Promise<MetricsPayload> {
    return this.request("/api/metrics");
  }

  setMode(mode: Mode): Promise<{ mode: Mode }> {
    return this.request("/api/mode", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ mode }),
    });
  }
}
