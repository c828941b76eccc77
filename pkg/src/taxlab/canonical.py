"""Canonical JSON document form of a taxonomy.

One self-contained JSON object carries the whole aggregate.  Lists keep
insertion order, object keys are emitted sorted, and the serializer is
pinned (two-space indent, trailing newline), so export -> import ->
export reproduces the file byte for byte.
"""

from __future__ import annotations

import json
from typing import Any

from .biblio import Paper
from .errors import ValidationError
from .model import Concept, Dimension, Mapping, Relation, Taxonomy

DOCUMENT_FORMAT = "taxlab-document"
DOCUMENT_VERSION = 1


def taxonomy_to_document(taxonomy: Taxonomy) -> dict[str, Any]:
    return {
        "format": DOCUMENT_FORMAT,
        "format_version": DOCUMENT_VERSION,
        "taxonomy": {
            "id": taxonomy.id,
            "name": taxonomy.name,
            "version": taxonomy.version,
            "public": taxonomy.public,
            "parent_id": taxonomy.parent_id,
        },
        "dimensions": [d.to_dict() for d in taxonomy.dimensions.values()],
        "concepts": [c.to_dict() for c in taxonomy.concepts.values()],
        "relations": [r.to_dict() for r in taxonomy.relations.values()],
        "synonyms": [s.to_dict() for s in taxonomy.synonyms],
        "papers": [p.to_dict() for p in taxonomy.papers.values()],
        "mappings": [m.to_dict() for m in taxonomy.mappings.values()],
        "positions": {cid: [x, y] for cid, (x, y) in taxonomy.positions.items()},
    }


def canonical_dumps(document: dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(d: dict[str, Any], key: str, where: str) -> Any:
    if key not in d:
        raise ValidationError(f"document {where} is missing '{key}'")
    return d[key]


def taxonomy_from_document(document: dict[str, Any]) -> Taxonomy:
    """Rebuild the aggregate, then run the full invariant check.

    Population is direct (no mutation API) so the stored version and
    insertion order survive the round trip untouched.
    """
    if not isinstance(document, dict) or document.get("format") != DOCUMENT_FORMAT:
        raise ValidationError("not a taxonomy document", expected_format=DOCUMENT_FORMAT)
    if document.get("format_version") != DOCUMENT_VERSION:
        raise ValidationError(
            "unsupported document version", format_version=document.get("format_version")
        )
    head = _require(document, "taxonomy", "root")
    t = Taxonomy(_require(head, "id", "taxonomy"), _require(head, "name", "taxonomy"))
    t.version = int(head.get("version", 1))
    t.public = bool(head.get("public", False))
    t.parent_id = head.get("parent_id")
    t.dimensions.clear()
    for d in document.get("dimensions", []):
        dim = Dimension(
            _require(d, "id", "dimension"), _require(d, "name", "dimension"), d.get("description", "")
        )
        t.dimensions[dim.id] = dim
    for c in document.get("concepts", []):
        concept = Concept(
            _require(c, "id", "concept"),
            _require(c, "dimension_id", "concept"),
            _require(c, "name", "concept"),
            c.get("kind", "node"),
            c.get("notes", ""),
        )
        t.concepts[concept.id] = concept
    for r in document.get("relations", []):
        rel = Relation(
            _require(r, "id", "relation"),
            _require(r, "source_id", "relation"),
            _require(r, "target_id", "relation"),
            r.get("rel_type", "unspecified"),
            r.get("annotation", ""),
        )
        t.relations[rel.id] = rel
    for p in document.get("papers", []):
        paper = Paper.from_dict(p)
        t.papers[paper.id] = paper
    for s in document.get("synonyms", []):
        cid = _require(s, "concept_id", "synonym")
        term = _require(s, "term", "synonym")
        t.restore_synonym(cid, term)
    for m in document.get("mappings", []):
        mapping = Mapping(
            _require(m, "paper_id", "mapping"),
            _require(m, "concept_id", "mapping"),
            m.get("provenance", "manual"),
            int(m.get("occurrence_count", 0)),
        )
        t.mappings[(mapping.paper_id, mapping.concept_id)] = mapping
    positions = document.get("positions", {})
    for eid, value in positions.items():
        try:
            x, y = value
        except (TypeError, ValueError):
            raise ValidationError("layout positions must be (x, y) pairs", element_id=eid) from None
        t.positions[eid] = (float(x), float(y))
    t._reindex()
    t.validate()
    return t
