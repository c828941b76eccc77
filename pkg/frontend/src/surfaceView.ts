/** Isometric projection of the server's 3-D surface view.
 *
 * The surface arrives as (concept x, concept y, z) triples over the matrix
 * axis. This module arranges them into a grid, normalizes heights, and
 * projects each grid cell to a screen-space quadrilateral painted
 * back-to-front.
 */

import type { MatrixPayload, SurfacePayload } from "./types";

export interface SurfaceQuad {
  xConcept: string;
  yConcept: string;
  z: number;
  /** Screen-space corners, back-to-front paint order. */
  points: [number, number][];
  /** 0..1 normalized height for coloring. */
  intensity: number;
}

export interface SurfaceScene {
  width: number;
  height: number;
  quads: SurfaceQuad[];
  zProperty: string;
  zMax: number;
}

export function surfaceGrid(payload: SurfacePayload, axis: string[]): number[][] {
  const index = new Map(axis.map((id, i) => [id, i] as const));
  const grid: number[][] = axis.map(() => axis.map(() => 0));
  for (const point of payload.points) {
    const i = index.get(point.x);
    const j = index.get(point.y);
    if (i !== undefined && j !== undefined) {
      const row = grid[i];
      if (row) row[j] = point.z;
    }
  }
  return grid;
}

export function buildSurfaceScene(
  payload: SurfacePayload,
  matrix: MatrixPayload,
  width: number,
  height: number,
): SurfaceScene {
  const axis = matrix.axis;
  const grid = surfaceGrid(payload, axis);
  const n = axis.length;
  let zMax = 0;
  grid.forEach((row) => row.forEach((z) => (zMax = Math.max(zMax, z))));

  // Isometric basis: x axis goes right-down, y axis goes left-down, z up.
  const cell = Math.min(width, height) / Math.max(2 * n, 1);
  const originX = width / 2;
  const originY = height * 0.22;
  const zScale = zMax === 0 ? 0 : (height * 0.5) / zMax;
  const project = (i: number, j: number, z: number): [number, number] => [
    originX + (i - j) * cell,
    originY + (i + j) * cell * 0.5 - z * zScale + height * 0.2,
  ];

  const quads: SurfaceQuad[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const z = grid[i]?.[j] ?? 0;
      quads.push({
        xConcept: axis[i] ?? "",
        yConcept: axis[j] ?? "",
        z,
        points: [
          project(i, j, z),
          project(i + 1, j, z),
          project(i + 1, j + 1, z),
          project(i, j + 1, z),
        ],
        intensity: zMax === 0 ? 0 : z / zMax,
      });
    }
  }
  // paint far cells first: lower i+j is further back
  quads.sort((a, b) => {
    const ai = axis.indexOf(a.xConcept) + axis.indexOf(a.yConcept);
    const bi = axis.indexOf(b.xConcept) + axis.indexOf(b.yConcept);
    return ai - bi;
  });
  return { width, height, quads, zProperty: payload.z_property, zMax };
}
