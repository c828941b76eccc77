/** Correlation heatmap with collapsible subtrees.
 *
 * The server matrix already aggregates transitively: the cell for a pair of
 * concepts counts papers mapped anywhere in either subtree. Collapsing a
 * subtree client-side therefore never recomputes anything — it hides the
 * descendant rows/columns and keeps the parent's row, which by construction
 * holds the whole-subtree aggregate.
 */

import type { AxisNode, MatrixPayload } from "./types";

export interface VisibleMatrix {
  ids: string[];
  names: string[];
  /** Hierarchy depth per visible row (for indented labels). */
  depths: number[];
  /** Whether the row is a collapsed parent standing in for its subtree. */
  collapsed: boolean[];
  cells: number[][];
}

export class HeatmapModel {
  private readonly index = new Map<string, number>();
  private readonly nameOf = new Map<string, string>();
  private readonly childrenOf = new Map<string, string[]>();
  private readonly collapsedIds = new Set<string>();
  /** Roots across all dimensions, in server axis order. */
  private readonly roots: AxisNode[];

  constructor(private readonly matrix: MatrixPayload) {
    matrix.axis.forEach((id, i) => {
      this.index.set(id, i);
      const name = matrix.names[i];
      this.nameOf.set(id, name ?? id);
    });
    const record = (node: AxisNode): void => {
      this.childrenOf.set(
        node.concept_id,
        node.children.map((c) => c.concept_id),
      );
      node.children.forEach(record);
    };
    this.roots = Object.values(matrix.axis_tree.roots_by_dimension)
      .flat()
      .sort((a, b) => (this.index.get(a.concept_id) ?? 0) - (this.index.get(b.concept_id) ?? 0));
    this.roots.forEach(record);
  }

  isCollapsed(id: string): boolean {
    return this.collapsedIds.has(id);
  }

  hasChildren(id: string): boolean {
    return (this.childrenOf.get(id) ?? []).length > 0;
  }

  collapse(id: string): void {
    if (this.hasChildren(id)) this.collapsedIds.add(id);
  }

  expand(id: string): void {
    this.collapsedIds.delete(id);
  }

  toggle(id: string): void {
    if (this.collapsedIds.has(id)) this.expand(id);
    else this.collapse(id);
  }

  /** Axis restricted to nodes whose ancestors are all expanded. */
  visible(): VisibleMatrix {
    const ids: string[] = [];
    const depths: number[] = [];
    const walk = (node: AxisNode, depth: number): void => {
      ids.push(node.concept_id);
      depths.push(depth);
      if (!this.collapsedIds.has(node.concept_id)) {
        node.children.forEach((child) => walk(child, depth + 1));
      }
    };
    this.roots.forEach((root) => walk(root, 0));
    const rows = ids.map((id) => this.index.get(id)!);
    const cells = rows.map((ri) =>
      rows.map((ci) => {
        const row = this.matrix.cells[ri];
        return row ? (row[ci] ?? 0) : 0;
      }),
    );
    return {
      ids,
      names: ids.map((id) => this.nameOf.get(id) ?? id),
      depths,
      collapsed: ids.map((id) => this.collapsedIds.has(id)),
      cells,
    };
  }

  /** Co-occurrence count for any concept pair from the full server matrix. */
  cell(a: string, b: string): number {
    const i = this.index.get(a);
    const j = this.index.get(b);
    if (i === undefined || j === undefined) return 0;
    return this.matrix.cells[i]?.[j] ?? 0;
  }
}

/** Map a count to a 0..1 intensity against the visible off-diagonal maximum. */
export function intensityScale(visible: VisibleMatrix): (value: number) => number {
  let max = 0;
  visible.cells.forEach((row, i) =>
    row.forEach((value, j) => {
      if (i !== j && value > max) max = value;
    }),
  );
  return (value: number) => (max === 0 ? 0 : Math.min(1, value / max));
}
