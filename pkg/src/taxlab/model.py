"""Taxonomy domain model and mutation engine.

A :class:`Taxonomy` aggregates dimensions, concepts, typed relations,
synonyms, registered paper snapshots, paper-to-concept mappings, and an
optional saved layout. Every successful state-changing operation bumps
``version`` by exactly one; the version doubles as the cache key for
derived views, so no-op calls (identical upserts, removing something
absent) leave it untouched.

Relations typed inheritance/composition/aggregation are read
child -> parent (``source_id`` is the child) and that subgraph must stay
acyclic. Associations are peer links exempt from the acyclicity rule.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from typing import Any, Iterable

from .biblio import Paper
from .errors import (
    HierarchyCycleError,
    MergeRejectedError,
    NameConflictError,
    NotFoundError,
    ValidationError,
)

RELATION_TYPES = ("unspecified", "association", "inheritance", "composition", "aggregation")
HIERARCHY_TYPES = frozenset({"inheritance", "composition", "aggregation"})
CONCEPT_KINDS = ("major", "node")


def new_id(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


def _clean_name(name: str, what: str) -> str:
    cleaned = (name or "").strip()
    if not cleaned:
        raise ValidationError(f"{what} name must be non-empty")
    return cleaned


def _check_provenance(provenance: str) -> str:
    if provenance == "manual" or (provenance.startswith("auto:") and len(provenance) > 5):
        return provenance
    raise ValidationError(
        "mapping provenance must be 'manual' or 'auto:<method>'", provenance=provenance
    )


@dataclass
class Dimension:
    id: str
    name: str
    description: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "name": self.name, "description": self.description}


@dataclass
class Concept:
    id: str
    dimension_id: str
    name: str
    kind: str = "node"  # "major" | "node", display attribute only
    notes: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "dimension_id": self.dimension_id,
            "name": self.name,
            "kind": self.kind,
            "notes": self.notes,
        }


@dataclass
class Relation:
    id: str
    source_id: str
    target_id: str
    rel_type: str = "unspecified"
    annotation: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "source_id": self.source_id,
            "target_id": self.target_id,
            "rel_type": self.rel_type,
            "annotation": self.annotation,
        }


@dataclass(frozen=True)
class Synonym:
    concept_id: str
    term: str

    def to_dict(self) -> dict[str, Any]:
        return {"concept_id": self.concept_id, "term": self.term}


@dataclass
class Mapping:
    paper_id: str
    concept_id: str
    provenance: str = "manual"  # "manual" | "auto:<method>"
    occurrence_count: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "paper_id": self.paper_id,
            "concept_id": self.concept_id,
            "provenance": self.provenance,
            "occurrence_count": self.occurrence_count,
        }


@dataclass
class MergeConflict:
    kind: str  # "concept_kind" | "relation_type" | "relation_cycle"
    subject: str
    parent_value: str
    fork_value: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "subject": self.subject,
            "parent_value": self.parent_value,
            "fork_value": self.fork_value,
        }


@dataclass
class MergeReport:
    added_dimensions: list[str] = field(default_factory=list)
    added_concepts: list[str] = field(default_factory=list)
    added_relations: list[str] = field(default_factory=list)
    added_mappings: list[str] = field(default_factory=list)
    added_synonyms: list[str] = field(default_factory=list)
    registered_papers: list[str] = field(default_factory=list)
    conflicts: list[MergeConflict] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (
            self.added_dimensions
            or self.added_concepts
            or self.added_relations
            or self.added_mappings
            or self.added_synonyms
            or self.registered_papers
            or self.conflicts
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "added_dimensions": list(self.added_dimensions),
            "added_concepts": list(self.added_concepts),
            "added_relations": list(self.added_relations),
            "added_mappings": list(self.added_mappings),
            "added_synonyms": list(self.added_synonyms),
            "registered_papers": list(self.registered_papers),
            "conflicts": [c.to_dict() for c in self.conflicts],
            "empty": self.empty,
        }


@dataclass
class TreeNode:
    concept_id: str
    children: list["TreeNode"] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"concept_id": self.concept_id, "children": [c.to_dict() for c in self.children]}


class Hierarchy:
    """Forest derived from the hierarchical relation subgraph.

    Roots are grouped by their own dimension (taxonomy dimension order);
    children appear in relation-insertion order. A concept with several
    parents hangs under its first parent and is listed in
    ``multi_parent``.
    """

    def __init__(self, roots_by_dimension: dict[str, list[TreeNode]], multi_parent: list[str]):
        self.roots_by_dimension = roots_by_dimension
        self.multi_parent = multi_parent
        self.parent: dict[str, str | None] = {}
        self.depth: dict[str, int] = {}
        self.leaf_counts: dict[str, int] = {}
        self._nodes: dict[str, TreeNode] = {}
        for roots in roots_by_dimension.values():
            for root in roots:
                self._index(root, None, 0)

    def _index(self, node: TreeNode, parent_id: str | None, depth: int) -> int:
        # Iterative would also do; taxonomies stay far below recursion limits.
        self._nodes[node.concept_id] = node
        self.parent[node.concept_id] = parent_id
        self.depth[node.concept_id] = depth
        leaves = 0
        for child in node.children:
            leaves += self._index(child, node.concept_id, depth + 1)
        self.leaf_counts[node.concept_id] = leaves
        return leaves if leaves else 1

    def node(self, concept_id: str) -> TreeNode:
        return self._nodes[concept_id]

    def dfs_order(self) -> list[str]:
        order: list[str] = []
        for roots in self.roots_by_dimension.values():
            for root in roots:
                order.extend(self.subtree_ids(root.concept_id))
        return order

    def subtree_ids(self, concept_id: str) -> list[str]:
        out: list[str] = []
        stack = [self._nodes[concept_id]]
        while stack:
            node = stack.pop()
            out.append(node.concept_id)
            stack.extend(reversed(node.children))
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "roots_by_dimension": {
                dim: [r.to_dict() for r in roots] for dim, roots in self.roots_by_dimension.items()
            },
            "multi_parent": list(self.multi_parent),
        }


class Taxonomy:
    """Mutable taxonomy aggregate with version counting."""

    def __init__(self, taxonomy_id: str, name: str, version: int = 1):
        self.id = taxonomy_id
        self.name = name
        self.version = version
        self.public = False
        self.parent_id: str | None = None
        self.dimensions: dict[str, Dimension] = {}
        self.concepts: dict[str, Concept] = {}
        self.relations: dict[str, Relation] = {}
        self._synonyms: dict[tuple[str, str], Synonym] = {}  # (concept_id, folded term)
        self.papers: dict[str, Paper] = {}
        self.mappings: dict[tuple[str, str], Mapping] = {}
        self.positions: dict[str, tuple[float, float]] = {}
        self._rel_by_pair: dict[tuple[str, str], str] = {}

    @classmethod
    def create(
        cls, name: str, taxonomy_id: str | None = None, default_dimension_id: str | None = None
    ) -> "Taxonomy":
        """New taxonomy at version 1 with one dimension named 'default'."""
        t = cls(taxonomy_id or new_id("tax"), _clean_name(name, "taxonomy"))
        dim = Dimension(default_dimension_id or new_id("dim"), "default")
        t.dimensions[dim.id] = dim
        return t

    # -- lookups ---------------------------------------------------------

    @property
    def synonyms(self) -> list[Synonym]:
        return list(self._synonyms.values())

    def require_dimension(self, dimension_id: str) -> Dimension:
        try:
            return self.dimensions[dimension_id]
        except KeyError:
            raise NotFoundError("dimension not found", dimension_id=dimension_id) from None

    def require_concept(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise NotFoundError("concept not found", concept_id=concept_id) from None

    def require_relation(self, relation_id: str) -> Relation:
        try:
            return self.relations[relation_id]
        except KeyError:
            raise NotFoundError("relation not found", relation_id=relation_id) from None

    def require_paper(self, paper_id: str) -> Paper:
        try:
            return self.papers[paper_id]
        except KeyError:
            raise NotFoundError("paper not registered in taxonomy", paper_id=paper_id) from None

    def dimension_by_name(self, name: str) -> Dimension | None:
        folded = name.casefold()
        for dim in self.dimensions.values():
            if dim.name.casefold() == folded:
                return dim
        return None

    def concept_by_name(self, dimension_id: str, name: str) -> Concept | None:
        folded = name.casefold()
        for concept in self.concepts.values():
            if concept.dimension_id == dimension_id and concept.name.casefold() == folded:
                return concept
        return None

    def synonyms_of(self, concept_id: str) -> list[str]:
        return [s.term for (cid, _), s in self._synonyms.items() if cid == concept_id]

    def _bump(self) -> None:
        self.version += 1

    # -- dimension / concept ops ----------------------------------------

    def add_dimension(
        self, name: str, description: str = "", dimension_id: str | None = None
    ) -> Dimension:
        name = _clean_name(name, "dimension")
        if self.dimension_by_name(name) is not None:
            raise NameConflictError("dimension name already used", name=name)
        dim = Dimension(dimension_id or new_id("dim"), name, description)
        self.dimensions[dim.id] = dim
        self._bump()
        return dim

    def add_concept(
        self,
        dimension_id: str,
        name: str,
        kind: str = "node",
        notes: str = "",
        concept_id: str | None = None,
    ) -> Concept:
        self.require_dimension(dimension_id)
        name = _clean_name(name, "concept")
        if kind not in CONCEPT_KINDS:
            raise ValidationError("concept kind must be 'major' or 'node'", kind=kind)
        if self.concept_by_name(dimension_id, name) is not None:
            raise NameConflictError(
                "concept name already used in dimension", name=name, dimension_id=dimension_id
            )
        concept = Concept(concept_id or new_id("con"), dimension_id, name, kind, notes)
        self.concepts[concept.id] = concept
        self._bump()
        return concept

    def update_concept(
        self, concept_id: str, kind: str | None = None, notes: str | None = None
    ) -> Concept:
        """Update display attributes; bumps only when something changes."""
        concept = self.require_concept(concept_id)
        changed = False
        if kind is not None and kind != concept.kind:
            if kind not in CONCEPT_KINDS:
                raise ValidationError("concept kind must be 'major' or 'node'", kind=kind)
            concept.kind = kind
            changed = True
        if notes is not None and notes != concept.notes:
            concept.notes = notes
            changed = True
        if changed:
            self._bump()
        return concept

    def set_public(self, public: bool) -> bool:
        public = bool(public)
        if public == self.public:
            return False
        self.public = public
        self._bump()
        return True

    def rename_concept(self, concept_id: str, new_name: str) -> Concept:
        concept = self.require_concept(concept_id)
        new_name = _clean_name(new_name, "concept")
        existing = self.concept_by_name(concept.dimension_id, new_name)
        if existing is not None and existing.id != concept_id:
            raise NameConflictError(
                "concept name already used in dimension",
                name=new_name,
                dimension_id=concept.dimension_id,
            )
        if concept.name == new_name:
            return concept
        concept.name = new_name
        self._bump()
        return concept

    def remove_concept(self, concept_id: str) -> None:
        """Delete a concept plus incident relations, mappings, synonyms and
        its layout entry. Children of a removed parent become roots."""
        self.require_concept(concept_id)
        for rid in [r.id for r in self.relations.values() if concept_id in (r.source_id, r.target_id)]:
            rel = self.relations.pop(rid)
            self._rel_by_pair.pop((rel.source_id, rel.target_id), None)
        for key in [k for k in self.mappings if k[1] == concept_id]:
            del self.mappings[key]
        for key in [k for k in self._synonyms if k[0] == concept_id]:
            del self._synonyms[key]
        self.positions.pop(concept_id, None)
        del self.concepts[concept_id]
        self._bump()

    # -- relations -------------------------------------------------------

    def _hierarchy_path(self, start: str, goal: str) -> list[str] | None:
        """Directed path start -> ... -> goal over hierarchy edges, or None."""
        adjacency: dict[str, list[str]] = {}
        for rel in self.relations.values():
            if rel.rel_type in HIERARCHY_TYPES:
                adjacency.setdefault(rel.source_id, []).append(rel.target_id)
        back: dict[str, str] = {}
        frontier = [start]
        seen = {start}
        while frontier:
            nxt: list[str] = []
            for node in frontier:
                for peer in adjacency.get(node, ()):
                    if peer in seen:
                        continue
                    seen.add(peer)
                    back[peer] = node
                    if peer == goal:
                        path = [goal]
                        while path[-1] != start:
                            path.append(back[path[-1]])
                        return list(reversed(path))
                    nxt.append(peer)
            frontier = nxt
        return None

    def _cycle_error(self, path_ids: list[str]) -> HierarchyCycleError:
        names = [self.concepts[cid].name for cid in path_ids]
        return HierarchyCycleError(
            "relation would create a hierarchy cycle: " + " -> ".join(names),
            cycle=names,
            cycle_ids=path_ids,
        )

    def add_relation(
        self,
        source_id: str,
        target_id: str,
        rel_type: str = "unspecified",
        annotation: str = "",
        relation_id: str | None = None,
    ) -> Relation:
        self.require_concept(source_id)
        self.require_concept(target_id)
        if rel_type not in RELATION_TYPES:
            raise ValidationError("unknown relation type", rel_type=rel_type)
        if source_id == target_id:
            raise ValidationError("relation endpoints must differ", concept_id=source_id)
        if (source_id, target_id) in self._rel_by_pair:
            raise ValidationError(
                "relation already exists for this source/target pair",
                source_id=source_id,
                target_id=target_id,
            )
        if rel_type in HIERARCHY_TYPES:
            path = self._hierarchy_path(target_id, source_id)
            if path:
                raise self._cycle_error(path)
        rel = Relation(relation_id or new_id("rel"), source_id, target_id, rel_type, annotation)
        self.relations[rel.id] = rel
        self._rel_by_pair[(source_id, target_id)] = rel.id
        self._bump()
        return rel

    def set_relation_type(self, relation_id: str, rel_type: str) -> Relation:
        rel = self.require_relation(relation_id)
        if rel_type not in RELATION_TYPES:
            raise ValidationError("unknown relation type", rel_type=rel_type)
        if rel.rel_type == rel_type:
            return rel
        if rel_type in HIERARCHY_TYPES:
            # Check over the other hierarchy edges; this edge keeps its endpoints.
            previous = rel.rel_type
            rel.rel_type = "unspecified"
            try:
                path = self._hierarchy_path(rel.target_id, rel.source_id)
            finally:
                rel.rel_type = previous
            if path:
                raise self._cycle_error(path)
        rel.rel_type = rel_type
        self._bump()
        return rel

    def annotate_relation(self, relation_id: str, annotation: str) -> Relation:
        rel = self.require_relation(relation_id)
        if rel.annotation == annotation:
            return rel
        rel.annotation = annotation
        self._bump()
        return rel

    def remove_relation(self, relation_id: str) -> None:
        rel = self.require_relation(relation_id)
        del self.relations[relation_id]
        self._rel_by_pair.pop((rel.source_id, rel.target_id), None)
        self._bump()

    # -- synonyms --------------------------------------------------------

    def restore_synonym(self, concept_id: str, term: str) -> None:
        """Reattach a synonym during document import; no version bump."""
        self._synonyms[(concept_id, term.casefold())] = Synonym(concept_id, term)

    def add_synonym(self, concept_id: str, term: str) -> tuple[Synonym, bool]:
        """Upsert; uniqueness is per concept on the case-folded term."""
        self.require_concept(concept_id)
        term = _clean_name(term, "synonym")
        key = (concept_id, term.casefold())
        if key in self._synonyms:
            return self._synonyms[key], False
        syn = Synonym(concept_id, term)
        self._synonyms[key] = syn
        self._bump()
        return syn, True

    def remove_synonym(self, concept_id: str, term: str) -> bool:
        self.require_concept(concept_id)
        removed = self._synonyms.pop((concept_id, term.casefold()), None)
        if removed is None:
            return False
        self._bump()
        return True

    # -- papers / mappings -----------------------------------------------

    def register_paper(self, paper: Paper) -> bool:
        """Snapshot a paper record into the taxonomy metadata (upsert)."""
        snapshot = paper.clone()
        existing = self.papers.get(paper.id)
        if existing is not None and existing.to_dict() == snapshot.to_dict():
            return False
        self.papers[paper.id] = snapshot
        self._bump()
        return True

    def _upsert_mapping(
        self, paper_id: str, concept_id: str, provenance: str, occurrence_count: int
    ) -> tuple[Mapping, bool]:
        key = (paper_id, concept_id)
        existing = self.mappings.get(key)
        candidate = Mapping(paper_id, concept_id, provenance, occurrence_count)
        if existing is None:
            self.mappings[key] = candidate
            return candidate, True
        if provenance != "manual" and existing.provenance == "manual":
            return existing, False  # auto never overwrites manual
        if (existing.provenance, existing.occurrence_count) == (provenance, occurrence_count):
            return existing, False
        self.mappings[key] = candidate
        return candidate, True

    def map_paper(
        self, paper_id: str, concept_id: str, provenance: str = "manual", occurrence_count: int = 0
    ) -> tuple[Mapping, bool]:
        self.require_paper(paper_id)
        self.require_concept(concept_id)
        _check_provenance(provenance)
        if occurrence_count < 0:
            raise ValidationError("occurrence_count must be >= 0", occurrence_count=occurrence_count)
        mapping, changed = self._upsert_mapping(paper_id, concept_id, provenance, occurrence_count)
        if changed:
            self._bump()
        return mapping, changed

    def unmap_paper(self, paper_id: str, concept_id: str) -> bool:
        if self.mappings.pop((paper_id, concept_id), None) is None:
            return False
        self._bump()
        return True

    def apply_suggestions(self, suggestions: Iterable[Any]) -> int:
        """Apply mapping suggestions as auto mappings; one version bump total."""
        applied = 0
        for s in suggestions:
            self.require_paper(s.paper_id)
            self.require_concept(s.concept_id)
            _, changed = self._upsert_mapping(
                s.paper_id, s.concept_id, f"auto:{s.method}", s.occurrence_count
            )
            if changed:
                applied += 1
        if applied:
            self._bump()
        return applied

    # -- layout ------------------------------------------------------------

    def save_layout(self, positions: dict[str, Any]) -> None:
        """Replace the saved layout wholesale. Ids must be concepts/dimensions."""
        unknown = sorted(
            eid for eid in positions if eid not in self.concepts and eid not in self.dimensions
        )
        if unknown:
            raise ValidationError("layout references unknown elements", unknown_ids=unknown)
        cleaned: dict[str, tuple[float, float]] = {}
        for eid, value in positions.items():
            try:
                x, y = value
                cleaned[eid] = (float(x), float(y))
            except (TypeError, ValueError):
                raise ValidationError("layout positions must be (x, y) pairs", element_id=eid) from None
        self.positions = cleaned
        self._bump()

    # -- keyword import (from review tags) ---------------------------------

    def import_keyword_concepts(
        self, dimension_id: str, groups: list[tuple[str, list[Paper]]]
    ) -> list[tuple[Concept, list[Mapping]]]:
        """Create (or reuse) one concept per keyword group and map its papers.

        Registers the papers into the taxonomy metadata as needed. Idempotent;
        a single version bump covers the whole import when anything changed.
        """
        self.require_dimension(dimension_id)
        changed = False
        out: list[tuple[Concept, list[Mapping]]] = []
        for display, papers in groups:
            display = _clean_name(display, "concept")
            concept = self.concept_by_name(dimension_id, display)
            if concept is None:
                concept = Concept(new_id("con"), dimension_id, display, "node", "")
                self.concepts[concept.id] = concept
                changed = True
            maps: list[Mapping] = []
            for paper in papers:
                existing = self.papers.get(paper.id)
                if existing is None or existing.to_dict() != paper.to_dict():
                    self.papers[paper.id] = paper.clone()
                    changed = True
                mapping, mutated = self._upsert_mapping(paper.id, concept.id, "manual", 0)
                changed = changed or mutated
                maps.append(mapping)
            out.append((concept, maps))
        if changed:
            self._bump()
        return out

    # -- fork / merge -------------------------------------------------------

    def fork(self, taxonomy_id: str | None = None, name: str | None = None) -> "Taxonomy":
        """Deep copy with fresh element ids, version reset to 1."""
        f = Taxonomy(taxonomy_id or new_id("tax"), name or f"{self.name} (fork)")
        f.parent_id = self.id
        f.public = self.public
        id_map: dict[str, str] = {}
        for dim in self.dimensions.values():
            nd = Dimension(new_id("dim"), dim.name, dim.description)
            id_map[dim.id] = nd.id
            f.dimensions[nd.id] = nd
        for concept in self.concepts.values():
            nc = Concept(new_id("con"), id_map[concept.dimension_id], concept.name, concept.kind, concept.notes)
            id_map[concept.id] = nc.id
            f.concepts[nc.id] = nc
        for rel in self.relations.values():
            nr = Relation(new_id("rel"), id_map[rel.source_id], id_map[rel.target_id], rel.rel_type, rel.annotation)
            id_map[rel.id] = nr.id
            f.relations[nr.id] = nr
            f._rel_by_pair[(nr.source_id, nr.target_id)] = nr.id
        for (cid, folded), syn in self._synonyms.items():
            f._synonyms[(id_map[cid], folded)] = Synonym(id_map[cid], syn.term)
        for paper in self.papers.values():
            f.papers[paper.id] = paper.clone()
        for (pid, cid), m in self.mappings.items():
            f.mappings[(pid, id_map[cid])] = Mapping(pid, id_map[cid], m.provenance, m.occurrence_count)
        for eid, pos in self.positions.items():
            f.positions[id_map[eid]] = pos
        return f

    def _concept_key(self, concept: Concept) -> tuple[str, str]:
        return (self.dimensions[concept.dimension_id].name.casefold(), concept.name.casefold())

    def merge_fork(self, fork: "Taxonomy") -> MergeReport:
        """Fold a fork's additions back into this (parent) taxonomy.

        Elements match by dimension/concept names (case-insensitive), not ids.
        Conflicting edits (kind or relation-type mismatches, cycle-blocked
        relations) are reported and left unapplied. Exactly one version bump.
        """
        if fork.parent_id != self.id:
            raise ValidationError(
                "taxonomy is not a fork of this parent", fork_id=fork.id, parent_id=self.id
            )
        report = MergeReport()
        dim_by_name = {d.name.casefold(): d for d in self.dimensions.values()}
        con_by_key: dict[tuple[str, str], Concept] = {
            self._concept_key(c): c for c in self.concepts.values()
        }

        for fdim in fork.dimensions.values():
            if fdim.name.casefold() not in dim_by_name:
                nd = Dimension(new_id("dim"), fdim.name, fdim.description)
                self.dimensions[nd.id] = nd
                dim_by_name[nd.name.casefold()] = nd
                report.added_dimensions.append(fdim.name)

        for fc in fork.concepts.values():
            key = fork._concept_key(fc)
            pc = con_by_key.get(key)
            if pc is None:
                target_dim = dim_by_name[key[0]]
                nc = Concept(new_id("con"), target_dim.id, fc.name, fc.kind, fc.notes)
                self.concepts[nc.id] = nc
                con_by_key[key] = nc
                report.added_concepts.append(f"{target_dim.name}/{fc.name}")
            elif pc.kind != fc.kind:
                report.conflicts.append(
                    MergeConflict("concept_kind", f"{key[0]}/{fc.name}", pc.kind, fc.kind)
                )

        rel_by_key: dict[tuple[tuple[str, str], tuple[str, str]], Relation] = {}
        for pr in self.relations.values():
            rel_by_key[
                (self._concept_key(self.concepts[pr.source_id]), self._concept_key(self.concepts[pr.target_id]))
            ] = pr
        for fr in fork.relations.values():
            skey = fork._concept_key(fork.concepts[fr.source_id])
            tkey = fork._concept_key(fork.concepts[fr.target_id])
            label = f"{skey[1]} -> {tkey[1]}"
            existing = rel_by_key.get((skey, tkey))
            if existing is not None:
                if existing.rel_type != fr.rel_type:
                    report.conflicts.append(
                        MergeConflict("relation_type", label, existing.rel_type, fr.rel_type)
                    )
                continue
            source, target = con_by_key[skey], con_by_key[tkey]
            if fr.rel_type in HIERARCHY_TYPES and self._hierarchy_path(target.id, source.id):
                report.conflicts.append(MergeConflict("relation_cycle", label, "", fr.rel_type))
                continue
            nr = Relation(new_id("rel"), source.id, target.id, fr.rel_type, fr.annotation)
            self.relations[nr.id] = nr
            self._rel_by_pair[(nr.source_id, nr.target_id)] = nr.id
            rel_by_key[(skey, tkey)] = nr
            report.added_relations.append(label)

        mapping_keys = {
            (m.paper_id, self._concept_key(self.concepts[m.concept_id]))
            for m in self.mappings.values()
        }
        for fm in fork.mappings.values():
            ckey = fork._concept_key(fork.concepts[fm.concept_id])
            if (fm.paper_id, ckey) in mapping_keys:
                continue
            if fm.paper_id not in self.papers:
                self.papers[fm.paper_id] = fork.papers[fm.paper_id].clone()
                report.registered_papers.append(fm.paper_id)
            pc = con_by_key[ckey]
            self.mappings[(fm.paper_id, pc.id)] = Mapping(
                fm.paper_id, pc.id, fm.provenance, fm.occurrence_count
            )
            mapping_keys.add((fm.paper_id, ckey))
            report.added_mappings.append(f"{fm.paper_id} -> {ckey[1]}")

        for (fcid, folded), syn in fork._synonyms.items():
            ckey = fork._concept_key(fork.concepts[fcid])
            pc = con_by_key[ckey]
            if (pc.id, folded) not in self._synonyms:
                self._synonyms[(pc.id, folded)] = Synonym(pc.id, syn.term)
                report.added_synonyms.append(f"{ckey[1]}: {syn.term}")

        self._bump()
        return report

    def merge_concepts(self, survivor_id: str, absorbed_id: str) -> Concept:
        """Merge ``absorbed`` into ``survivor``.

        Mappings and synonyms re-point (survivor's copies win on duplicates),
        the absorbed name becomes a synonym, incident relations re-point with
        self-loops and duplicate pairs dropped. Rejected atomically when the
        two concepts are hierarchy ancestor/descendant of each other, since
        contracting them would create a cycle.
        """
        survivor = self.require_concept(survivor_id)
        absorbed = self.require_concept(absorbed_id)
        if survivor_id == absorbed_id:
            raise ValidationError("cannot merge a concept with itself", concept_id=survivor_id)
        path = self._hierarchy_path(survivor_id, absorbed_id) or self._hierarchy_path(
            absorbed_id, survivor_id
        )
        if path:
            names = [self.concepts[cid].name for cid in path]
            raise MergeRejectedError(
                "merge would create a hierarchy cycle: " + " -> ".join(names),
                cycle=names,
                cycle_ids=path,
            )

        for key in [k for k in self.mappings if k[1] == absorbed_id]:
            m = self.mappings.pop(key)
            skey = (m.paper_id, survivor_id)
            if skey not in self.mappings:
                self.mappings[skey] = Mapping(m.paper_id, survivor_id, m.provenance, m.occurrence_count)

        for key in [k for k in self._synonyms if k[0] == absorbed_id]:
            syn = self._synonyms.pop(key)
            nkey = (survivor_id, key[1])
            if nkey not in self._synonyms:
                self._synonyms[nkey] = Synonym(survivor_id, syn.term)
        name_key = (survivor_id, absorbed.name.casefold())
        if name_key not in self._synonyms:
            self._synonyms[name_key] = Synonym(survivor_id, absorbed.name)

        for rid in [r.id for r in self.relations.values() if absorbed_id in (r.source_id, r.target_id)]:
            rel = self.relations[rid]
            ns = survivor_id if rel.source_id == absorbed_id else rel.source_id
            nt = survivor_id if rel.target_id == absorbed_id else rel.target_id
            self._rel_by_pair.pop((rel.source_id, rel.target_id), None)
            if ns == nt or (ns, nt) in self._rel_by_pair:
                del self.relations[rid]
                continue
            rel.source_id, rel.target_id = ns, nt
            self._rel_by_pair[(ns, nt)] = rid

        self.positions.pop(absorbed_id, None)
        del self.concepts[absorbed_id]
        self._bump()
        return survivor

    # -- hierarchy / validation ---------------------------------------------

    def derive_hierarchy(self) -> Hierarchy:
        parent: dict[str, str] = {}
        children: dict[str, list[str]] = {cid: [] for cid in self.concepts}
        multi: list[str] = []
        seen_multi: set[str] = set()
        for rel in self.relations.values():  # insertion order
            if rel.rel_type not in HIERARCHY_TYPES:
                continue
            child, par = rel.source_id, rel.target_id
            if child in parent:
                if child not in seen_multi:
                    seen_multi.add(child)
                    multi.append(child)
                continue
            parent[child] = par
            children[par].append(child)

        def build(cid: str) -> TreeNode:
            return TreeNode(cid, [build(c) for c in children[cid]])

        roots_by_dimension: dict[str, list[TreeNode]] = {d: [] for d in self.dimensions}
        for concept in self.concepts.values():
            if concept.id not in parent:
                roots_by_dimension[concept.dimension_id].append(build(concept.id))
        return Hierarchy(roots_by_dimension, multi)

    def validate(self) -> None:
        """Full invariant check; raises ValidationError on the first breach."""
        if not self.name.strip():
            raise ValidationError("taxonomy name must be non-empty")
        if self.version < 1:
            raise ValidationError("version must be >= 1", version=self.version)
        seen_dims: set[str] = set()
        for dim in self.dimensions.values():
            folded = dim.name.casefold()
            if not folded:
                raise ValidationError("dimension name must be non-empty", dimension_id=dim.id)
            if folded in seen_dims:
                raise ValidationError("duplicate dimension name", name=dim.name)
            seen_dims.add(folded)
        seen_concepts: set[tuple[str, str]] = set()
        for concept in self.concepts.values():
            if concept.dimension_id not in self.dimensions:
                raise ValidationError("concept references unknown dimension", concept_id=concept.id)
            if concept.kind not in CONCEPT_KINDS:
                raise ValidationError("unknown concept kind", concept_id=concept.id, kind=concept.kind)
            key = (concept.dimension_id, concept.name.casefold())
            if not key[1]:
                raise ValidationError("concept name must be non-empty", concept_id=concept.id)
            if key in seen_concepts:
                raise ValidationError("duplicate concept name in dimension", name=concept.name)
            seen_concepts.add(key)
        pairs: set[tuple[str, str]] = set()
        for rel in self.relations.values():
            if rel.source_id not in self.concepts or rel.target_id not in self.concepts:
                raise ValidationError("relation references unknown concept", relation_id=rel.id)
            if rel.rel_type not in RELATION_TYPES:
                raise ValidationError("unknown relation type", relation_id=rel.id, rel_type=rel.rel_type)
            if rel.source_id == rel.target_id:
                raise ValidationError("self-loop relation", relation_id=rel.id)
            pair = (rel.source_id, rel.target_id)
            if pair in pairs:
                raise ValidationError("duplicate relation pair", relation_id=rel.id)
            pairs.add(pair)
        # hierarchy acyclicity: DFS coloring over child -> parent edges
        adjacency: dict[str, list[str]] = {}
        for rel in self.relations.values():
            if rel.rel_type in HIERARCHY_TYPES:
                adjacency.setdefault(rel.source_id, []).append(rel.target_id)
        color: dict[str, int] = {}

        def visit(node: str) -> None:
            color[node] = 1
            for peer in adjacency.get(node, ()):
                state = color.get(peer, 0)
                if state == 1:
                    raise ValidationError("hierarchy contains a cycle", concept_id=peer)
                if state == 0:
                    visit(peer)
            color[node] = 2

        for cid in self.concepts:
            if color.get(cid, 0) == 0:
                visit(cid)
        for (cid, folded), syn in self._synonyms.items():
            if cid not in self.concepts:
                raise ValidationError("synonym references unknown concept", concept_id=cid)
            if not syn.term.strip() or syn.term.casefold() != folded:
                raise ValidationError("malformed synonym entry", concept_id=cid, term=syn.term)
        for (pid, cid), m in self.mappings.items():
            if pid not in self.papers:
                raise ValidationError("mapping references unregistered paper", paper_id=pid)
            if cid not in self.concepts:
                raise ValidationError("mapping references unknown concept", concept_id=cid)
            if m.occurrence_count < 0:
                raise ValidationError("negative occurrence count", paper_id=pid, concept_id=cid)
            _check_provenance(m.provenance)
        for eid in self.positions:
            if eid not in self.concepts and eid not in self.dimensions:
                raise ValidationError("layout references unknown element", element_id=eid)

    def _reindex(self) -> None:
        self._rel_by_pair = {(r.source_id, r.target_id): r.id for r in self.relations.values()}
