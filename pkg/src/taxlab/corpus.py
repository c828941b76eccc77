"""Corpus directory layout: one text file per paper plus a manifest.

Layout::

    corpus/
      manifest.json        # {"papers": [{"id", "title", ...}, ...]}
      <paper-id>.txt       # optional full text per paper

Baselines for conformity experiments are CSV files with a
``paper_id,concept_id`` header.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

from .biblio import Paper
from .errors import ValidationError


def load_corpus(directory: str | Path) -> list[Paper]:
    root = Path(directory)
    manifest_path = root / "manifest.json"
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    entries = manifest.get("papers")
    if not isinstance(entries, list):
        raise ValidationError("corpus manifest must contain a 'papers' list", path=str(manifest_path))
    papers: list[Paper] = []
    for entry in entries:
        if "id" not in entry or "title" not in entry:
            raise ValidationError("corpus manifest entries need 'id' and 'title'", entry=entry)
        paper = Paper.from_dict(entry)
        text_path = root / f"{paper.id}.txt"
        if text_path.exists():
            paper.body_text = text_path.read_text(encoding="utf-8")
        papers.append(paper)
    return papers


def write_corpus(directory: str | Path, papers: Iterable[Paper]) -> None:
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for paper in papers:
        record = paper.to_dict()
        body = record.pop("body_text")
        record.pop("tags")
        record.pop("votes")
        entries.append(record)
        if body:
            (root / f"{paper.id}.txt").write_text(body, encoding="utf-8")
    with open(root / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump({"papers": entries}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_baseline(path: str | Path) -> set[tuple[str, str]]:
    pairs: set[tuple[str, str]] = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"paper_id", "concept_id"} <= set(reader.fieldnames):
            raise ValidationError(
                "baseline CSV needs a paper_id,concept_id header", path=str(path)
            )
        for row in reader:
            pairs.add((row["paper_id"], row["concept_id"]))
    return pairs


def write_baseline(path: str | Path, pairs: Iterable[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["paper_id", "concept_id"])
        for paper_id, concept_id in sorted(pairs):
            writer.writerow([paper_id, concept_id])
