"""Correlation analysis over taxonomies.

The central notion is the effective paper set papers*(c): the union of
papers mapped to a concept and to every descendant in the derived
hierarchy, so collapsed subtrees read straight off the parent row.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .biblio import Paper
from .errors import ValidationError
from .model import Hierarchy, Taxonomy

SURFACE_PROPERTIES = ("citation_sum", "citation_max", "paper_count")


@dataclass(frozen=True)
class Filter:
    """Restriction applied to analysis views; the default is the identity.

    ``dimensions`` / ``subtree_roots`` prune the concept axis; the paper
    fields (year range, minimum include votes, tag) prune the papers
    counted; cells whose pair count falls below ``min_cell`` report 0.
    """

    dimensions: frozenset[str] | None = None
    subtree_roots: frozenset[str] | None = None
    year_min: int | None = None
    year_max: int | None = None
    min_votes: int | None = None
    tag: str | None = None
    min_cell: int = 0

    @classmethod
    def create(
        cls,
        dimensions: Sequence[str] | None = None,
        subtree_roots: Sequence[str] | None = None,
        year_min: int | None = None,
        year_max: int | None = None,
        min_votes: int | None = None,
        tag: str | None = None,
        min_cell: int = 0,
    ) -> "Filter":
        return cls(
            dimensions=frozenset(dimensions) if dimensions else None,
            subtree_roots=frozenset(subtree_roots) if subtree_roots else None,
            year_min=year_min,
            year_max=year_max,
            min_votes=min_votes,
            tag=tag,
            min_cell=min_cell,
        )

    @property
    def has_paper_filter(self) -> bool:
        return any(v is not None for v in (self.year_min, self.year_max, self.min_votes, self.tag))

    def accepts_paper(self, paper: Paper) -> bool:
        if self.year_min is not None and (paper.year is None or paper.year < self.year_min):
            return False
        if self.year_max is not None and (paper.year is None or paper.year > self.year_max):
            return False
        if self.min_votes is not None and paper.positive_votes() < self.min_votes:
            return False
        if self.tag is not None and not paper.has_tag(self.tag):
            return False
        return True

    def fingerprint(self) -> str:
        payload = json.dumps(
            {
                "dimensions": sorted(self.dimensions) if self.dimensions is not None else None,
                "subtree_roots": sorted(self.subtree_roots) if self.subtree_roots is not None else None,
                "year_min": self.year_min,
                "year_max": self.year_max,
                "min_votes": self.min_votes,
                "tag": self.tag,
                "min_cell": self.min_cell,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class CorrelationMatrix:
    axis: list[str]  # concept ids, depth-first hierarchy order
    names: list[str]
    cells: list[list[int]]  # symmetric; diagonal = |papers*(c)| under the filter
    axis_tree: dict[str, Any]
    multi_parent: list[str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "axis": list(self.axis),
            "names": list(self.names),
            "cells": [list(row) for row in self.cells],
            "axis_tree": self.axis_tree,
            "multi_parent": list(self.multi_parent),
        }


@dataclass
class SurfacePoint:
    x: str
    y: str
    z: float

    def to_dict(self) -> dict[str, Any]:
        return {"x": self.x, "y": self.y, "z": self.z}


@dataclass
class CoverageEntry:
    concept_id: str
    name: str
    depth: int
    paper_count: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "concept_id": self.concept_id,
            "name": self.name,
            "depth": self.depth,
            "paper_count": self.paper_count,
        }


@dataclass
class CoverageReport:
    entries: list[CoverageEntry]
    gaps: list[str] = field(default_factory=list)  # concept ids with zero coverage

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [e.to_dict() for e in self.entries], "gaps": list(self.gaps)}


def effective_paper_sets(taxonomy: Taxonomy, hierarchy: Hierarchy | None = None) -> dict[str, set[str]]:
    """papers*(c) for every concept: own mappings plus all tree descendants'."""
    h = hierarchy or taxonomy.derive_hierarchy()
    direct: dict[str, set[str]] = {}
    for (paper_id, concept_id) in taxonomy.mappings:
        direct.setdefault(concept_id, set()).add(paper_id)
    out: dict[str, set[str]] = {}

    def visit(node) -> set[str]:
        papers = set(direct.get(node.concept_id, ()))
        for child in node.children:
            papers |= visit(child)
        out[node.concept_id] = papers
        return papers

    for roots in h.roots_by_dimension.values():
        for root in roots:
            visit(root)
    return out


def effective_papers(taxonomy: Taxonomy, concept_id: str) -> set[str]:
    taxonomy.require_concept(concept_id)
    return effective_paper_sets(taxonomy)[concept_id]


def _axis_for(taxonomy: Taxonomy, h: Hierarchy, flt: Filter) -> list[str]:
    order = h.dfs_order()
    if flt.subtree_roots is not None:
        keep: set[str] = set()
        for root in flt.subtree_roots:
            taxonomy.require_concept(root)
            keep.update(h.subtree_ids(root))
        order = [cid for cid in order if cid in keep]
    if flt.dimensions is not None:
        order = [cid for cid in order if taxonomy.concepts[cid].dimension_id in flt.dimensions]
    return order


def build_matrix(taxonomy: Taxonomy, flt: Filter | None = None) -> CorrelationMatrix:
    """Concept x concept shared-paper counts.

    cells[i][j] = |papers*(i) & papers*(j)| restricted by the filter.
    Computed through a paper -> axis-concepts inverted index, so cost is
    sum(degree^2) over papers rather than a pairwise set intersection per
    cell; a brute-force oracle of the direct definition lives in the tests.
    """
    flt = flt or Filter()
    h = taxonomy.derive_hierarchy()
    sets = effective_paper_sets(taxonomy, h)
    axis = _axis_for(taxonomy, h, flt)
    n = len(axis)
    cells = [[0] * n for _ in range(n)]
    allowed: set[str] | None = None
    if flt.has_paper_filter:
        allowed = {pid for pid, p in taxonomy.papers.items() if flt.accepts_paper(p)}
    paper_to_axis: dict[str, list[int]] = {}
    for i, cid in enumerate(axis):
        for pid in sets[cid]:
            if allowed is None or pid in allowed:
                paper_to_axis.setdefault(pid, []).append(i)
    for idxs in paper_to_axis.values():
        for i in idxs:
            row = cells[i]
            for j in idxs:
                row[j] += 1
    if flt.min_cell > 0:
        m = flt.min_cell
        for row in cells:
            for j, value in enumerate(row):
                if value < m:
                    row[j] = 0
    return CorrelationMatrix(
        axis=axis,
        names=[taxonomy.concepts[cid].name for cid in axis],
        cells=cells,
        axis_tree=h.to_dict(),
        multi_parent=list(h.multi_parent),
    )


def build_surface(
    taxonomy: Taxonomy,
    flt: Filter | None,
    z_property: str,
    base: CorrelationMatrix,
) -> list[SurfacePoint]:
    """Height field over the same concept pairs as ``base``.

    z aggregates the filtered intersection papers*(x) & papers*(y):
    citation_sum, citation_max, or paper_count (which reproduces the
    matrix exactly, min_cell zeroing included).
    """
    if z_property not in SURFACE_PROPERTIES:
        raise ValidationError("unknown surface property", z_property=z_property)
    flt = flt or Filter()
    h = taxonomy.derive_hierarchy()
    axis = _axis_for(taxonomy, h, flt)
    if axis != base.axis:
        raise ValidationError("surface base matrix does not match taxonomy and filter")
    sets = effective_paper_sets(taxonomy, h)
    if flt.has_paper_filter:
        allowed = {pid for pid, p in taxonomy.papers.items() if flt.accepts_paper(p)}
        sets = {cid: papers & allowed for cid, papers in sets.items()}
    points: list[SurfacePoint] = []
    for x in axis:
        for y in axis:
            shared = sets[x] & sets[y]
            if len(shared) < flt.min_cell:
                z = 0.0
            elif z_property == "paper_count":
                z = float(len(shared))
            elif z_property == "citation_sum":
                z = float(sum(taxonomy.papers[pid].citation_count for pid in shared))
            else:  # citation_max
                z = float(max((taxonomy.papers[pid].citation_count for pid in shared), default=0))
            points.append(SurfacePoint(x, y, z))
    return points


def coverage_report(taxonomy: Taxonomy) -> CoverageReport:
    """Per-concept papers* counts (matrix diagonal) plus zero-coverage gaps."""
    h = taxonomy.derive_hierarchy()
    sets = effective_paper_sets(taxonomy, h)
    entries: list[CoverageEntry] = []
    gaps: list[str] = []
    for cid in h.dfs_order():
        count = len(sets[cid])
        entries.append(
            CoverageEntry(cid, taxonomy.concepts[cid].name, h.depth[cid], count)
        )
        if count == 0:
            gaps.append(cid)
    return CoverageReport(entries, gaps)


def matrix_to_csv(matrix: CorrelationMatrix) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + matrix.names)
    for name, row in zip(matrix.names, matrix.cells):
        writer.writerow([name] + list(row))
    return out.getvalue()


def coverage_to_csv(report: CoverageReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["concept_id", "name", "depth", "paper_count"])
    for entry in report.entries:
        writer.writerow([entry.concept_id, entry.name, entry.depth, entry.paper_count])
    return out.getvalue()
