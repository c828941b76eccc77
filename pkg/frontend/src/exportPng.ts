/** Render views to PNG bytes for download. */

import { buildCircleScene } from "./circlesView";
import { HeatmapModel, intensityScale } from "./heatmap";
import { encodePng } from "./png";
import { Raster, hexColor, ramp } from "./raster";
import type { SurfaceScene } from "./surfaceView";
import type { CirclesPayload } from "./types";

export interface ExportOptions {
  cellSize?: number;
  margin?: number;
}

const HEAT = hexColor("#b80f33");
const GRID = hexColor("#d5d9de");
const DIAGONAL = hexColor("#4a4e55");

/** Heatmap as currently visible (collapsed subtrees stay collapsed). */
export function heatmapToPng(model: HeatmapModel, options: ExportOptions = {}): Uint8Array {
  const visible = model.visible();
  const cell = options.cellSize ?? 14;
  const margin = options.margin ?? 4;
  const n = visible.ids.length;
  const side = Math.max(n * cell + 2 * margin, 2 * margin + 1);
  const raster = new Raster(side, side);
  const scale = intensityScale(visible);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const value = visible.cells[i]?.[j] ?? 0;
      const color = i === j ? ramp(DIAGONAL, value > 0 ? 1 : 0.15) : ramp(HEAT, scale(value));
      raster.fillRect(margin + j * cell, margin + i * cell, cell, cell, color);
    }
  }
  for (let k = 0; k <= n; k++) {
    raster.fillRect(margin, margin + k * cell, n * cell, 1, GRID);
    raster.fillRect(margin + k * cell, margin, 1, n * cell, GRID);
  }
  return encodePng(raster.width, raster.height, raster.pixels);
}

/** Circle-packing layout at the given pixel size. */
export function circlesToPng(
  payload: CirclesPayload,
  width = 480,
  height = 480,
): Uint8Array {
  const scene = buildCircleScene(payload, width, height);
  const raster = new Raster(width, height);
  const outline = hexColor("#10212f");
  for (const circle of scene.circles) {
    raster.fillCircle(circle.cx, circle.cy, circle.r, hexColor(circle.color));
    raster.strokeCircle(circle.cx, circle.cy, circle.r, outline);
  }
  return encodePng(width, height, raster.pixels);
}

/** Projected surface quads, painted back-to-front. */
export function surfaceToPng(scene: SurfaceScene): Uint8Array {
  const raster = new Raster(scene.width, scene.height);
  const low = hexColor("#dbe7f0");
  const high = hexColor("#14507a");
  for (const quad of scene.quads) {
    const t = quad.intensity;
    const color = {
      r: Math.round(low.r + (high.r - low.r) * t),
      g: Math.round(low.g + (high.g - low.g) * t),
      b: Math.round(low.b + (high.b - low.b) * t),
    };
    raster.fillPolygon(quad.points, color);
  }
  return encodePng(scene.width, scene.height, raster.pixels);
}
