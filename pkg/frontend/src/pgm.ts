/** Binary PGM (P5, maxval 255) decoding for stream frames. */

export interface PgmImage {
  width: number;
  height: number;
  /** Row-major grayscale bytes, length = width * height. */
  pixels: Uint8Array;
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d;
}

export function decodePgm(data: Uint8Array): PgmImage {
  if (data.length < 2 || data[0] !== 0x50 || data[1] !== 0x35) {
    throw new Error("not a binary PGM (no P5 magic)");
  }
  const tokens: number[] = [];
  let pos = 2;
  while (tokens.length < 3) {
    while (pos < data.length && isSpace(data[pos]!)) pos++;
    const start = pos;
    while (pos < data.length && !isSpace(data[pos]!)) pos++;
    if (start === pos) throw new Error("truncated PGM header");
    let value = 0;
    for (let i = start; i < pos; i++) {
      const d = data[i]! - 0x30;
      if (d < 0 || d > 9) throw new Error("bad PGM header token");
      value = value * 10 + d;
    }
    tokens.push(value);
  }
  const [width, height, maxval] = tokens as [number, number, number];
  if (maxval !== 255) throw new Error(`unsupported PGM maxval ${maxval}`);
  pos++; // single whitespace byte after maxval
  const body = data.subarray(pos);
  if (body.length !== width * height) {
    throw new Error(`PGM body is ${body.length} bytes, expected ${width * height}`);
  }
  return { width, height, pixels: body };
}

/** Expand grayscale to RGBA for a canvas ImageData buffer. */
export function toRgba(image: PgmImage): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(image.width * image.height * 4);
  for (let i = 0; i < image.pixels.length; i++) {
    const v = image.pixels[i]!;
    const j = i * 4;
    out[j] = v;
    out[j + 1] = v;
    out[j + 2] = v;
    out[j + 3] = 255;
  }
  return out;
}
