/** Incremental multipart/x-mixed-replace splitter.
 *
 * Push network chunks in, complete parts come out.  The splitter trusts
 * Content-Length and resynchronizes at the next boundary if a part is
 * malformed, so one damaged part never wedges the stream.
 */

export interface Part {
  headers: Map<string, string>;
  body: Uint8Array;
}

const CR = 0x0d;
const LF = 0x0a;

function concat(a: Uint8Array, b: Uint8Array): Uint8Array {
  if (a.length === 0) return b;
  const out = new Uint8Array(a.length + b.length);
  out.set(a, 0);
  out.set(b, a.length);
  return out;
}

function indexOfSeq(haystack: Uint8Array, needle: Uint8Array, from = 0): number {
  outer: for (let i = from; i + needle.length <= haystack.length; i++) {
    for (let j = 0; j < needle.length; j++) {
      if (haystack[i + j] !== needle[j]) continue outer;
    }
    return i;
  }
  return -1;
}

export class MultipartSplitter {
  private buffer: Uint8Array = new Uint8Array(0);
  private readonly marker: Uint8Array;

  constructor(boundary = "curioframe") {
    this.marker = new TextEncoder().encode(`--${boundary}`);
  }

  /** Feed one chunk; returns every part completed by it. */
  push(chunk: Uint8Array): Part[] {
    this.buffer = concat(this.buffer, chunk);
    const parts: Part[] = [];
    for (;;) {
      const part = this.tryPart();
      if (part === null) break;
      if (part !== "resync") parts.push(part);
    }
    return parts;
  }

  private tryPart(): Part | "resync" | null {
    const start = indexOfSeq(this.buffer, this.marker);
    if (start < 0) {
      // keep a tail so a split marker can complete later
      const keep = this.marker.length - 1;
      if (this.buffer.length > keep) this.buffer = this.buffer.subarray(this.buffer.length - keep);
      return null;
    }
    const afterMarker = start + this.marker.length;
    const headerEnd = indexOfSeq(this.buffer, new Uint8Array([CR, LF, CR, LF]), afterMarker);
    if (headerEnd < 0) return null; // headers incomplete

    const headerText = new TextDecoder().decode(this.buffer.subarray(afterMarker, headerEnd));
    const headers = new Map<string, string>();
    for (const line of headerText.split("\r\n")) {
      const colon = line.indexOf(":");
      if (colon > 0) headers.set(line.slice(0, colon).trim().toLowerCase(), line.slice(colon + 1).trim());
    }
    const length = Number(headers.get("content-length"));
    if (!Number.isInteger(length) || length < 0) {
      this.buffer = this.buffer.subarray(afterMarker); // resync past this boundary
      return "resync";
    }
    const bodyStart = headerEnd + 4;
    if (this.buffer.length < bodyStart + length + 2) return null; // body incomplete
    const body = this.buffer.subarray(bodyStart, bodyStart + length);
    // the declared length must land on the part's closing CRLF
    if (this.buffer[bodyStart + length] !== CR || this.buffer[bodyStart + length + 1] !== LF) {
      this.buffer = this.buffer.subarray(afterMarker);
      return "resync";
    }
    this.buffer = this.buffer.subarray(bodyStart + length + 2);
    return { headers, body: body.slice() };
  }
}
