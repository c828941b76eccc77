"""Nested-circle layout for taxonomy hierarchies.

Every concept becomes a circle; children are packed inside their parent
along a golden-angle spiral.  The layout is computed once per parent at
unit scale and then scaled by a per-depth coefficient chosen so that each
subtree provably fits inside its parent with an 8% margin.  All
arithmetic is straight-line float math in a fixed order, so repeated runs
produce bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .model import Taxonomy, TreeNode

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

# Siblings keep a relative cushion so float roundoff can never make two
# circles overlap; containment gets a 0.92 scale factor per level.
_SIBLING_PAD = 1e-6
_FIT_FACTOR = 0.92
_ROOT_GAP_FACTOR = 0.15


@dataclass
class Circle:
    concept_id: str
    name: str
    dimension_id: str
    parent_id: str | None
    depth: int
    x: float
    y: float
    r: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "concept_id": self.concept_id,
            "name": self.name,
            "dimension_id": self.dimension_id,
            "parent_id": self.parent_id,
            "depth": self.depth,
            "x": self.x,
            "y": self.y,
            "r": self.r,
        }


@dataclass
class CirclesLayout:
    circles: list[Circle]
    bounds: tuple[float, float, float, float]  # min_x, min_y, max_x, max_y

    def to_dict(self) -> dict[str, Any]:
        return {
            "circles": [c.to_dict() for c in self.circles],
            "bounds": list(self.bounds),
        }


def _unit_radius(leaf_count: int) -> float:
    return math.sqrt(1.0 + leaf_count)


def _min_free_t(intervals: list[tuple[float, float]]) -> float:
    """Smallest t >= 0 outside the union of open intervals."""
    t = 0.0
    for start, end in sorted(intervals):
        if start > t:
            break
        if end > t:
            t = end
    return t


def _pack_children(radii: list[float]) -> list[tuple[float, float]]:
    """Positions for sibling circles, parent-centered coordinates.

    Child 0 sits at the center; child i walks outward along the ray at
    angle i * GOLDEN_ANGLE to the nearest point clear of all earlier
    siblings.  The forbidden stretch of the ray contributed by a placed
    sibling is the solution interval of a quadratic, so placement is
    exact rather than stepped.
    """
    positions: list[tuple[float, float]] = []
    for i, r in enumerate(radii):
        if i == 0:
            positions.append((0.0, 0.0))
            continue
        angle = i * GOLDEN_ANGLE
        ex, ey = math.cos(angle), math.sin(angle)
        intervals: list[tuple[float, float]] = []
        for (px, py), pr in zip(positions, radii):
            clearance = (r + pr) * (1.0 + _SIBLING_PAD)
            b = ex * px + ey * py
            disc = b * b - (px * px + py * py) + clearance * clearance
            if disc <= 0.0:
                continue
            root = math.sqrt(disc)
            lo, hi = b - root, b + root
            if hi > 0.0:
                intervals.append((max(lo, 0.0), hi))
        t = _min_free_t(intervals)
        positions.append((t * ex, t * ey))
    return positions


def layout_circles(taxonomy: Taxonomy) -> CirclesLayout:
    h = taxonomy.derive_hierarchy()
    roots: list[TreeNode] = []
    for dim in taxonomy.dimensions.values():
        roots.extend(h.roots_by_dimension.get(dim.id, []))
    if not roots:
        return CirclesLayout([], (0.0, 0.0, 0.0, 0.0))

    unit = {cid: _unit_radius(h.leaf_counts[cid]) for cid in h.depth}

    # Unit-scale child packings and the radius that encloses each of them.
    packing: dict[str, list[tuple[float, float]]] = {}
    enclosing: dict[str, float] = {}
    nodes_by_depth: dict[int, list[TreeNode]] = {}

    def collect(node: TreeNode) -> None:
        nodes_by_depth.setdefault(h.depth[node.concept_id], []).append(node)
        if node.children:
            radii = [unit[ch.concept_id] for ch in node.children]
            pos = _pack_children(radii)
            packing[node.concept_id] = pos
            enclosing[node.concept_id] = max(
                math.hypot(x, y) + r for (x, y), r in zip(pos, radii)
            )
        for child in node.children:
            collect(child)

    for root in roots:
        collect(root)

    # One scale coefficient per depth: every depth-(d+1) packing must fit
    # inside the tightest depth-d parent.
    max_depth = max(nodes_by_depth)
    k: dict[int, float] = {0: 1.0}
    for d in range(max_depth):
        ratios = [
            _FIT_FACTOR * k[d] * unit[node.concept_id] / enclosing[node.concept_id]
            for node in nodes_by_depth.get(d, [])
            if node.children
        ]
        if not ratios:
            break
        k[d + 1] = min(ratios)

    circles: list[Circle] = []

    def emit(node: TreeNode, cx: float, cy: float, parent_id: str | None) -> None:
        cid = node.concept_id
        depth = h.depth[cid]
        r = k[depth] * unit[cid]
        circles.append(
            Circle(
                concept_id=cid,
                name=taxonomy.concepts[cid].name,
                dimension_id=taxonomy.concepts[cid].dimension_id,
                parent_id=parent_id,
                depth=depth,
                x=cx,
                y=cy,
                r=r,
            )
        )
        if node.children:
            scale = k[depth + 1]
            for child, (px, py) in zip(node.children, packing[cid]):
                emit(child, cx + scale * px, cy + scale * py, cid)

    # Roots sit on a single horizontal band, spaced by a relative gap.
    x_cursor = 0.0
    prev_r: float | None = None
    for root in roots:
        r = unit[root.concept_id]
        if prev_r is None:
            x_cursor = 0.0
        else:
            gap = _ROOT_GAP_FACTOR * max(prev_r, r)
            x_cursor += prev_r + gap + r
        emit(root, x_cursor, 0.0, None)
        prev_r = r

    min_x = min(c.x - c.r for c in circles)
    max_x = max(c.x + c.r for c in circles)
    min_y = min(c.y - c.r for c in circles)
    max_y = max(c.y + c.r for c in circles)
    return CirclesLayout(circles, (min_x, min_y, max_x, max_y))
