/** Self-contained PNG encoder (8-bit RGBA, no compression).
 *
 * Emits a spec-conformant PNG using stored (uncompressed) deflate blocks
 * inside the zlib stream, so no compression library is needed in the browser
 * or in node. Any PNG reader can decode the output; it is just larger than a
 * compressed one.
 */

const PNG_SIGNATURE = Uint8Array.from([137, 80, 78, 71, 13, 10, 26, 10]);
const MAX_STORED_BLOCK = 65535;

const CRC_TABLE: Uint32Array = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

export function crc32(bytes: Uint8Array): number {
  let crc = 0xffffffff;
  for (let i = 0; i < bytes.length; i++) {
    crc = (CRC_TABLE[(crc ^ bytes[i]!) & 0xff]! ^ (crc >>> 8)) >>> 0;
  }
  return (crc ^ 0xffffffff) >>> 0;
}

export function adler32(bytes: Uint8Array): number {
  let a = 1;
  let b = 0;
  for (let i = 0; i < bytes.length; i++) {
    a = (a + bytes[i]!) % 65521;
    b = (b + a) % 65521;
  }
  return ((b << 16) | a) >>> 0;
}

function u32be(value: number): Uint8Array {
  return Uint8Array.from([
    (value >>> 24) & 0xff,
    (value >>> 16) & 0xff,
    (value >>> 8) & 0xff,
    value & 0xff,
  ]);
}

function concat(parts: Uint8Array[]): Uint8Array {
  const total = parts.reduce((sum, p) => sum + p.length, 0);
  const out = new Uint8Array(total);
  let at = 0;
  for (const part of parts) {
    out.set(part, at);
    at += part.length;
  }
  return out;
}

function chunk(type: string, data: Uint8Array): Uint8Array {
  const typeBytes = Uint8Array.from(type.split("").map((c) => c.charCodeAt(0)));
  const crc = crc32(concat([typeBytes, data]));
  return concat([u32be(data.length), typeBytes, data, u32be(crc)]);
}

/** zlib stream with stored deflate blocks: header, blocks, adler32. */
export function zlibStore(raw: Uint8Array): Uint8Array {
  const parts: Uint8Array[] = [Uint8Array.from([0x78, 0x01])];
  let at = 0;
  do {
    const len = Math.min(MAX_STORED_BLOCK, raw.length - at);
    const final = at + len >= raw.length ? 1 : 0;
    const header = Uint8Array.from([
      final,
      len & 0xff,
      (len >>> 8) & 0xff,
      ~len & 0xff,
      (~len >>> 8) & 0xff,
    ]);
    parts.push(header, raw.subarray(at, at + len));
    at += len;
  } while (at < raw.length);
  parts.push(u32be(adler32(raw)));
  return concat(parts);
}

/** Encode an RGBA buffer (row-major, 4 bytes per pixel) as a PNG file. */
export function encodePng(
  width: number,
  height: number,
  rgba: Uint8Array | Uint8ClampedArray,
): Uint8Array {
  if (rgba.length !== width * height * 4) {
    throw new Error(
      `pixel buffer is ${rgba.length} bytes; ${width}x${height} RGBA needs ${width * height * 4}`,
    );
  }
  const ihdr = concat([
    u32be(width),
    u32be(height),
    Uint8Array.from([8, 6, 0, 0, 0]), // 8-bit, RGBA, deflate, adaptive, no interlace
  ]);
  // each scanline is prefixed with filter type 0 (None)
  const raw = new Uint8Array(height * (1 + width * 4));
  for (let y = 0; y < height; y++) {
    raw[y * (1 + width * 4)] = 0;
    const row = rgba.subarray(y * width * 4, (y + 1) * width * 4);
    raw.set(row, y * (1 + width * 4) + 1);
  }
  return concat([
    PNG_SIGNATURE,
    chunk("IHDR", ihdr),
    chunk("IDAT", zlibStore(raw)),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

/** Parse width/height back out of an encoded PNG (sanity checks, tests). */
export function pngDimensions(png: Uint8Array): { width: number; height: number } {
  for (let i = 0; i < PNG_SIGNATURE.length; i++) {
    if (png[i] !== PNG_SIGNATURE[i]) throw new Error("not a PNG: bad signature");
  }
  const be = (at: number): number =>
    ((png[at]! << 24) | (png[at + 1]! << 16) | (png[at + 2]! << 8) | png[at + 3]!) >>> 0;
  return { width: be(16), height: be(20) };
}
