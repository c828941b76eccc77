/** Screen mapping for the server-computed circle-packing layout.
 *
 * The server owns the geometry (positions and radii in an abstract plane);
 * this module only fits that plane into a pixel viewport, assigns depth
 * colors, and answers hit tests. Nothing here moves a circle.
 */

import type { CirclePlacement, CirclesPayload } from "./types";

export interface ScreenCircle {
  conceptId: string;
  name: string;
  depth: number;
  cx: number;
  cy: number;
  r: number;
  color: string;
}

export interface CircleScene {
  width: number;
  height: number;
  /** Painted back-to-front: parents before children. */
  circles: ScreenCircle[];
}

/** Depth palette: roots darkest, leaves lightest. */
export const DEPTH_COLORS = ["#1d3557", "#2a6f97", "#468faf", "#89c2d9", "#b8e0ee", "#e2f1f8"];

export function depthColor(depth: number): string {
  const last = DEPTH_COLORS[DEPTH_COLORS.length - 1] ?? "#e2f1f8";
  return DEPTH_COLORS[Math.min(depth, DEPTH_COLORS.length - 1)] ?? last;
}

export function buildCircleScene(
  payload: CirclesPayload,
  width: number,
  height: number,
  margin = 8,
): CircleScene {
  const [minX, minY, maxX, maxY] = payload.bounds;
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const offsetX = (width - spanX * scale) / 2;
  const offsetY = (height - spanY * scale) / 2;
  const toScreen = (c: CirclePlacement): ScreenCircle => ({
    conceptId: c.concept_id,
    name: c.name,
    depth: c.depth,
    cx: offsetX + (c.x - minX) * scale,
    // flip y so "up" in the abstract plane is up on screen
    cy: height - (offsetY + (c.y - minY) * scale),
    r: c.r * scale,
    color: depthColor(c.depth),
  });
  const circles = [...payload.circles].sort((a, b) => a.depth - b.depth).map(toScreen);
  return { width, height, circles };
}

/** Deepest circle containing the point, or null. */
export function hitTest(scene: CircleScene, x: number, y: number): ScreenCircle | null {
  let best: ScreenCircle | null = null;
  for (const circle of scene.circles) {
    const dx = x - circle.cx;
    const dy = y - circle.cy;
    if (dx * dx + dy * dy <= circle.r * circle.r) {
      if (best === null || circle.depth > best.depth) best = circle;
    }
  }
  return best;
}
