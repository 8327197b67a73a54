import { describe, expect, it } from "vitest";

import { MultipartSplitter, Part } from "../src/multipart.js";

function encodePart(body: Uint8Array, timestamp: number, boundary = "curioframe"): Uint8Array {
  const head = new TextEncoder().encode(
    `--${boundary}\r\n` +
      "Content-Type: image/x-portable-graymap\r\n" +
      `Content-Length: ${body.length}\r\n` +
      `X-Timestamp: ${timestamp}\r\n\r\n`,
  );
  const out = new Uint8Array(head.length + body.length + 2);
  out.set(head, 0);
  out.set(body, head.length);
  out.set([0x0d, 0x0a], head.length + body.length);
  return out;
}

function concatAll(pieces: Uint8Array[]): Uint8Array {
  const total = pieces.reduce((n, p) => n + p.length, 0);
  const out = new Uint8Array(total);
  let at = 0;
  for (const piece of pieces) {
    out.set(piece, at);
    at += piece.length;
  }
  return out;
}

const bodyA = new Uint8Array([1, 2, 3, 4, 5]);
const bodyB = new Uint8Array(Array.from({ length: 300 }, (_, i) => i % 256));

describe("MultipartSplitter", () => {
  it("splits two parts fed as one chunk", () => {
    const splitter = new MultipartSplitter();
    const parts = splitter.push(concatAll([encodePart(bodyA, 0.1), encodePart(bodyB, 0.2)]));
    expect(parts).toHaveLength(2);
    expect(Array.from(parts[0]!.body)).toEqual(Array.from(bodyA));
    expect(Array.from(parts[1]!.body)).toEqual(Array.from(bodyB));
    expect(parts[0]!.headers.get("x-timestamp")).toBe("0.1");
  });

  it("is invariant under chunk size", () => {
    const stream = concatAll([encodePart(bodyA, 1), encodePart(bodyB, 2), encodePart(bodyA, 3)]);
    for (const size of [1, 2, 7, 64, stream.length]) {
      const splitter = new MultipartSplitter();
      const parts: Part[] = [];
      for (let at = 0; at < stream.length; at += size) {
        parts.push(...splitter.push(stream.subarray(at, at + size)));
      }
      expect(parts.map((p) => p.headers.get("x-timestamp"))).toEqual(["1", "2", "3"]);
      expect(Array.from(parts[1]!.body)).toEqual(Array.from(bodyB));
    }
  });

  it("resyncs past garbage between parts", () => {
    const splitter = new MultipartSplitter();
    const garbage = new Uint8Array([0, 1, 71, 65, 82, 66, 2]);
    const parts = splitter.push(
      concatAll([encodePart(bodyA, 1), garbage, encodePart(bodyB, 2)]),
    );
    expect(parts.map((p) => p.headers.get("x-timestamp"))).toEqual(["1", "2"]);
  });

  it("drops a part whose declared length lies", () => {
    const bad = encodePart(bodyA, 1);
    const text = new TextDecoder().decode(bad).replace("Content-Length: 5", "Content-Length: 3");
    const splitter = new MultipartSplitter();
    const parts = [
      ...splitter.push(new TextEncoder().encode(text)),
      ...splitter.push(encodePart(bodyB, 2)),
    ];
    expect(parts.map((p) => p.headers.get("x-timestamp"))).toEqual(["2"]);
  });

  it("honors a custom boundary", () => {
    const splitter = new MultipartSplitter("fence");
    const parts = splitter.push(encodePart(bodyA, 9, "fence"));
    expect(parts).toHaveLength(1);
  });
});
