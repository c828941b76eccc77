/** Minimal software rasterizer over an RGBA byte buffer.
 *
 * Just enough to export views as images without a canvas: opaque fills for
 * rectangles, circles, and polygons, all clipped to the buffer.
 */

export interface Rgba {
  r: number;
  g: number;
  b: number;
  a?: number;
}

export class Raster {
  readonly pixels: Uint8ClampedArray;

  constructor(
    readonly width: number,
    readonly height: number,
    background: Rgba = { r: 255, g: 255, b: 255 },
  ) {
    if (!Number.isInteger(width) || !Number.isInteger(height) || width <= 0 || height <= 0) {
      throw new Error(`raster size must be positive integers, got ${width}x${height}`);
    }
    this.pixels = new Uint8ClampedArray(width * height * 4);
    this.fillRect(0, 0, width, height, background);
  }

  setPixel(x: number, y: number, color: Rgba): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const at = (y * this.width + x) * 4;
    this.pixels[at] = color.r;
    this.pixels[at + 1] = color.g;
    this.pixels[at + 2] = color.b;
    this.pixels[at + 3] = color.a ?? 255;
  }

  getPixel(x: number, y: number): Rgba {
    const at = (y * this.width + x) * 4;
    return {
      r: this.pixels[at] ?? 0,
      g: this.pixels[at + 1] ?? 0,
      b: this.pixels[at + 2] ?? 0,
      a: this.pixels[at + 3] ?? 0,
    };
  }

  private hline(x0: number, x1: number, y: number, color: Rgba): void {
    if (y < 0 || y >= this.height) return;
    const from = Math.max(0, Math.ceil(Math.min(x0, x1)));
    const to = Math.min(this.width - 1, Math.floor(Math.max(x0, x1)));
    for (let x = from; x <= to; x++) this.setPixel(x, y, color);
  }

  fillRect(x: number, y: number, w: number, h: number, color: Rgba): void {
    const y0 = Math.max(0, Math.floor(y));
    const y1 = Math.min(this.height - 1, Math.ceil(y + h) - 1);
    for (let row = y0; row <= y1; row++) this.hline(x, x + w - 1, row, color);
  }

  strokeRect(x: number, y: number, w: number, h: number, color: Rgba): void {
    this.fillRect(x, y, w, 1, color);
    this.fillRect(x, y + h - 1, w, 1, color);
    this.fillRect(x, y, 1, h, color);
    this.fillRect(x + w - 1, y, 1, h, color);
  }

  fillCircle(cx: number, cy: number, r: number, color: Rgba): void {
    const top = Math.max(0, Math.floor(cy - r));
    const bottom = Math.min(this.height - 1, Math.ceil(cy + r));
    for (let y = top; y <= bottom; y++) {
      const dy = y - cy;
      const half = r * r - dy * dy;
      if (half < 0) continue;
      const dx = Math.sqrt(half);
      this.hline(cx - dx, cx + dx, y, color);
    }
  }

  strokeCircle(cx: number, cy: number, r: number, color: Rgba): void {
    const steps = Math.max(16, Math.ceil(2 * Math.PI * r));
    for (let s = 0; s < steps; s++) {
      const t = (2 * Math.PI * s) / steps;
      this.setPixel(Math.round(cx + r * Math.cos(t)), Math.round(cy + r * Math.sin(t)), color);
    }
  }

  /** Even-odd scanline fill. */
  fillPolygon(points: [number, number][], color: Rgba): void {
    if (points.length < 3) return;
    const ys = points.map((p) => p[1]);
    const top = Math.max(0, Math.floor(Math.min(...ys)));
    const bottom = Math.min(this.height - 1, Math.ceil(Math.max(...ys)));
    for (let y = top; y <= bottom; y++) {
      const crossings: number[] = [];
      for (let i = 0; i < points.length; i++) {
        const [x0, y0] = points[i]!;
        const [x1, y1] = points[(i + 1) % points.length]!;
        if (y0 === y1) continue;
        const scan = y + 0.5;
        if ((scan >= y0 && scan < y1) || (scan >= y1 && scan < y0)) {
          crossings.push(x0 + ((scan - y0) * (x1 - x0)) / (y1 - y0));
        }
      }
      crossings.sort((a, b) => a - b);
      for (let k = 0; k + 1 < crossings.length; k += 2) {
        this.hline(crossings[k]!, crossings[k + 1]!, y, color);
      }
    }
  }
}

/** Parse "#rrggbb" (or "#rgb") into an Rgba. */
export function hexColor(hex: string): Rgba {
  let body = hex.replace(/^#/, "");
  if (body.length === 3) {
    body = body
      .split("")
      .map((c) => c + c)
      .join("");
  }
  const value = Number.parseInt(body, 16);
  if (body.length !== 6 || Number.isNaN(value)) {
    throw new Error(`not a hex color: ${hex}`);
  }
  return { r: (value >> 16) & 0xff, g: (value >> 8) & 0xff, b: value & 0xff };
}

/** Blend white→color by t in [0,1]; used for heatmap intensity ramps. */
export function ramp(color: Rgba, t: number): Rgba {
  const clamp = Math.max(0, Math.min(1, t));
  return {
    r: Math.round(255 + (color.r - 255) * clamp),
    g: Math.round(255 + (color.g - 255) * clamp),
    b: Math.round(255 + (color.b - 255) * clamp),
  };
}
