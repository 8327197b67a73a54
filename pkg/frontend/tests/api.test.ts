import { describe, expect, it } from "vitest";

import { ApiError, BridgeApi } from "../src/api.js";

function fakeFetch(routes: Record<string, { status: number; body: unknown }>): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const key = `${init?.method ?? "GET"} ${url}`;
    const route = routes[key];
    if (!route) throw new Error(`unexpected ${key}`);
    return new Response(JSON.stringify(route.body), {
      status: route.status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
}

describe("BridgeApi", () => {
  it("reads config", async () => {
    const api = new BridgeApi(
      "http://h",
      fakeFetch({ "GET http://h/api/config": { status: 200, body: { confidence: "medium" } } }),
    );
    await expect(api.getConfig()).resolves.toMatchObject({ confidence: "medium" });
  });

  it("surfaces field errors from a rejected PUT", async () => {
    const api = new BridgeApi(
      "http://h",
      fakeFetch({
        "PUT http://h/api/config": {
          status: 400,
          body: { error: { field: "confidence", message: "must be one of low, medium, high" } },
        },
      }),
    );
    const err = await api.putConfig({ confidence: "high" }).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).fieldError).toEqual({
      field: "confidence",
      message: "must be one of low, medium, high",
    });
    expect((err as ApiError).status).toBe(400);
  });

  it("tolerates non-JSON error bodies", async () => {
    const impl = (async () => new Response("boom", { status: 500 })) as typeof fetch;
    const api = new BridgeApi("http://h", impl);
    const err = await api.getMetrics().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).fieldError).toBeNull();
  });
});
