/** Command link over the bridge's /uart WebSocket.
 *
 * The socket implementation is injected so the same link runs on the
 * browser's native WebSocket and on a plain client in tests.  Replies
 * come back in order, one per line sent, so a FIFO of resolvers pairs
 * them up.  The link redials with a backoff after a drop; a pending
 * send at that moment rejects rather than silently retrying (a motion
 * command must not fire twice).
 */

import type { LinkStatus } from "./types.js";

/** The subset of the WebSocket surface the link needs. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

const REDIAL_MS = 1000;

export class UartLink {
  private socket: SocketLike | null = null;
  private pending: Array<{ resolve: (reply: string) => void; reject: (err: Error) => void }> = [];
  private stopped = false;
  private redialTimer: ReturnType<typeof setTimeout> | null = null;
  status: LinkStatus = "lost";

  constructor(
    private readonly url: string,
    private readonly factory: SocketFactory,
    private readonly onStatus?: (status: LinkStatus) => void,
  ) {
    this.dial();
  }

  private setStatus(status: LinkStatus): void {
    if (this.status !== status) {
      this.status = status;
      this.onStatus?.(status);
    }
  }

  private dial(): void {
    if (this.stopped) return;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => this.setStatus("connected");
    socket.onmessage = (event) => {
      const waiter = this.pending.shift();
      waiter?.resolve(String(event.data));
    };
    const drop = (): void => {
      if (this.socket !== socket) return; // an old socket going quiet
      this.socket = null;
      this.setStatus("lost");
      this.flushPending(new Error("link lost"));
      if (!this.stopped) this.redialTimer = setTimeout(() => this.dial(), REDIAL_MS);
    };
    socket.onclose = drop;
    socket.onerror = drop;
  }

  private flushPending(err: Error): void {
    const waiters = this.pending;
    this.pending = [];
    for (const waiter of waiters) waiter.reject(err);
  }

  /** Send one command line; resolves with the device reply line. */
  send(line: string): Promise<string> {
    const socket = this.socket;
    if (socket === null || this.status !== "connected") {
      return Promise.reject(new Error("link lost"));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      try {
        socket.send(line);
      } catch (err) {
        this.pending.pop();
        reject(err instanceof Error ? err : new Error(String(err)));
      }
    });
  }

  close(): void {
    this.stopped = true;
    if (this.redialTimer !== null) clearTimeout(this.redialTimer);
    this.flushPending(new Error("link closed"));
    this.socket?.close();
    this.socket = null;
  }
}
