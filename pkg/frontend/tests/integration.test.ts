/** End-to-end checks against a real simulator process.
 *
 * One `curiosim sim` serves every test in this file: the stream must
 * sustain at least 5 frames/s through the console's own decoder, a
 * teleop press must arrive at the device as the exact canonical text,
 * and a live confidence change must show up in /api/metrics within 2 s.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ChildProcess, spawn } from "node:child_process";

import { BridgeApi } from "../src/api.js";
import { openStream, StreamFrame } from "../src/stream.js";
import { teleopCommand } from "../src/teleop.js";
import { UartLink } from "../src/uart.js";
import { NodeWebSocket } from "./ws-node.js";

let sim: ChildProcess;
let httpPort = 0;
let api: BridgeApi;

function waitUntil(check: () => boolean | Promise<boolean>, deadlineMs: number): Promise<void> {
  const t0 = Date.now();
  return new Promise((resolve, reject) => {
    const poll = async (): Promise<void> => {
      if (await check()) return resolve();
      if (Date.now() - t0 > deadlineMs) return reject(new Error("condition never held"));
      setTimeout(() => void poll(), 100);
    };
    void poll();
  });
}

beforeAll(async () => {
  const env: Record<string, string | undefined> = { ...process.env, CURIOSIM_BACKEND: "numpy" };
  delete env.CURIO_SEED;
  sim = spawn(
    "python3",
    ["-m", "curiosim", "sim", "--world", "smalltarget", "--tcp-port", "0", "--http-port", "0"],
    { env, stdio: ["ignore", "pipe", "pipe"] },
  );
  let stdout = "";
  let stderr = "";
  sim.stderr!.on("data", (chunk: Buffer) => (stderr += chunk.toString()));
  await new Promise<void>((resolve, reject) => {
    const deadline = setTimeout(
      () => reject(new Error(`simulator gave no endpoints; stderr: ${stderr}`)),
      20_000,
    );
    sim.stdout!.on("data", (chunk: Buffer) => {
      stdout += chunk.toString();
      const m = /bridge: http:\/\/127\.0\.0\.1:(\d+)/.exec(stdout);
      if (m) {
        httpPort = Number(m[1]);
        clearTimeout(deadline);
        resolve();
      }
    });
    sim.on("exit", (code) => reject(new Error(`simulator exited ${code}: ${stderr}`)));
  });
  api = new BridgeApi(`http://127.0.0.1:${httpPort}`);
}, 30_000);

afterAll(() => {
  sim?.kill("SIGTERM");
});

describe("console against a live simulator", () => {
  it("decodes the stream at 5 frames/s or better", async () => {
    const frames: StreamFrame[] = [];
    const t0 = Date.now();
    const handle = openStream(`http://127.0.0.1:${httpPort}/stream`, {
      onFrame: (frame) => frames.push(frame),
    });
    try {
      await waitUntil(() => frames.length >= 12, 5000);
    } finally {
      handle.stop();
    }
    const seconds = (Date.now() - t0) / 1000;
    expect(frames.length / seconds).toBeGreaterThanOrEqual(5);
    expect(frames[0]!.width).toBe(320);
    expect(frames[0]!.height).toBe(240);
    const stamps = frames.map((f) => f.timestamp);
    expect([...stamps].sort((a, b) => a - b)).toEqual(stamps);
  }, 15_000);

  it("lands a teleop press on the device as exact canonical text", async () => {
    await api.setMode("teleop");
    const link = new UartLink(`ws://127.0.0.1:${httpPort}/uart`, (url) => new NodeWebSocket(url));
    try {
      await waitUntil(() => link.status === "connected", 5000);

      const forward = teleopCommand("forward", "medium");
      expect(forward).toBe("go(200,200,600)");
      await expect(link.send(forward)).resolves.toBe("ok");

      const left = teleopCommand("left", "slow");
      expect(left).toBe("go(-50,50,300)");
      await expect(link.send(left)).resolves.toBe("ok");

      // the bridge arbitrates: outside teleop the device must not hear us
      await api.setMode("track");
      await expect(link.send(teleopCommand("back", "fast"))).resolves.toBe("err Busy");
    } finally {
      link.close();
      await api.setMode("idle");
    }
  }, 15_000);

  it("shows a live confidence change in the metrics within 2 s", async () => {
    // slow response keeps the robot far enough that the tiny target
    // stays between the medium and high fill gates for many seconds
    const confirmed = await api.putConfig({ response: "slow", confidence: "medium" });
    expect(confirmed.response).toBe("slow");
    await api.setMode("track");
    try {
      await waitUntil(async () => {
        const m = await api.getMetrics();
        return m.frames_processed >= 5 && m.visibility_fraction === 1.0;
      }, 8000);

      await api.putConfig({ confidence: "high" });
      const t0 = Date.now();
      await waitUntil(async () => (await api.getMetrics()).visibility_fraction < 1.0, 2000);
      expect(Date.now() - t0).toBeLessThanOrEqual(2000);
    } finally {
      await api.setMode("idle");
      await api.putConfig({ confidence: "medium", response: "medium" });
    }
  }, 20_000);
});
