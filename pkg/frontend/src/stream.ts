/** Live camera stream: fetch /stream, split parts, decode PGM frames.
 *
 * Reconnects with a short backoff when the stream drops, reporting
 * status changes so the UI can show a banner without a page reload.
 */

import { MultipartSplitter } from "./multipart.js";
import { decodePgm, PgmImage } from "./pgm.js";
import type { LinkStatus } from "./types.js";

export interface StreamFrame extends PgmImage {
  timestamp: number;
}

export interface StreamHandle {
  stop(): void;
}

export interface StreamCallbacks {
  onFrame(frame: StreamFrame, fps: number): void;
  onStatus?(status: LinkStatus): void;
}

const RETRY_MS = 1000;
const FPS_WINDOW_MS = 2000;

export function openStream(
  url: string,
  callbacks: StreamCallbacks,
  fetchImpl: typeof fetch = fetch,
): StreamHandle {
  let stopped = false;
  let retryTimer: ReturnType<typeof setTimeout> | null = null;
  const arrivals: number[] = [];

  const fps = (now: number): number => {
    arrivals.push(now);
    while (arrivals.length > 0 && now - arrivals[0]! > FPS_WINDOW_MS) arrivals.shift();
    const span = now - arrivals[0]!;
    return span > 0 ? ((arrivals.length - 1) * 1000) / span : 0;
  };

  const run = async (): Promise<void> => {
    const resp = await fetchImpl(url, { headers: { Accept: "*/*" } });
    if (!resp.ok || resp.body === null) throw new Error(`stream answered ${resp.status}`);
    callbacks.onStatus?.("connected");
    const splitter = new MultipartSplitter();
    const reader = resp.body.getReader();
    for (;;) {
      const { done, value } = await reader.read();
      if (stopped) {
        await reader.cancel().catch(() => undefined);
        return;
      }
      if (done) throw new Error("stream ended");
      for (const part of splitter.push(value)) {
        let image: PgmImage;
        try {
          image = decodePgm(part.body);
        } catch {
          continue; // one bad part is not worth a disconnect
        }
        const timestamp = Number(part.headers.get("x-timestamp") ?? "0");
        callbacks.onFrame({ ...image, timestamp }, fps(Date.now()));
      }
    }
  };

  const loop = (): void => {
    if (stopped) return;
    run().catch(() => {
      if (stopped) return;
      callbacks.onStatus?.("lost");
      retryTimer = setTimeout(loop, RETRY_MS);
    });
  };
  loop();

  return {
    stop(): void {
      stopped = true;
      if (retryTimer !== null) clearTimeout(retryTimer);
    },
  };
}
