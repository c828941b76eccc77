"""Collective literature screening: paper intake, votes, tags.

The review board is the platform-wide paper pool. Papers get registered
into individual taxonomies (as snapshots) when they are mapped there.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, TYPE_CHECKING

from .biblio import VOTE_VALUES, Paper, Tag, Vote
from .errors import NotFoundError, ValidationError
from .model import new_id

if TYPE_CHECKING:
    from .model import Concept, Mapping, Taxonomy
    from .store import DocumentStore


@dataclass
class Rejection:
    record: dict[str, Any]
    reason: str

    def to_dict(self) -> dict[str, Any]:
        return {"record": self.record, "reason": self.reason}


class ReviewBoard:
    """Paper pool with screening votes and tags."""

    def __init__(self, store: "DocumentStore | None" = None):
        self._store = store
        self.papers: dict[str, Paper] = {}
        if store is not None:
            for pid in store.list_ids("paper"):
                self.papers[pid] = Paper.from_dict(store.get("paper", pid))

    def _persist(self, paper: Paper) -> None:
        if self._store is not None:
            self._store.put("paper", paper.id, paper.to_dict())

    def require_paper(self, paper_id: str) -> Paper:
        try:
            return self.papers[paper_id]
        except KeyError:
            raise NotFoundError("paper not found", paper_id=paper_id) from None

    def list_papers(self) -> list[Paper]:
        return list(self.papers.values())

    # -- intake -----------------------------------------------------------

    def import_records(
        self, records: Iterable[dict[str, Any]]
    ) -> tuple[list[Paper], list[Rejection]]:
        """Batch import with per-record success. A record needs a title;
        records with a DOI already present are rejected, DOI-less records
        deduplicate on the case-folded title against DOI-less papers."""
        created: list[Paper] = []
        rejections: list[Rejection] = []
        seen_dois = {p.doi.casefold() for p in self.papers.values() if p.doi}
        seen_titles = {p.title.casefold() for p in self.papers.values() if not p.doi}
        for record in records:
            title = str(record.get("title") or "").strip()
            if not title:
                rejections.append(Rejection(dict(record), "missing title"))
                continue
            doi = record.get("doi")
            doi = str(doi).strip() if doi else None
            if doi:
                if doi.casefold() in seen_dois:
                    rejections.append(Rejection(dict(record), f"duplicate doi: {doi}"))
                    continue
            elif title.casefold() in seen_titles:
                rejections.append(Rejection(dict(record), f"duplicate title: {title}"))
                continue
            try:
                year = record.get("year")
                paper = Paper(
                    id=str(record.get("id") or new_id("pap")),
                    title=title,
                    abstract=str(record.get("abstract", "")),
                    authors=[str(a) for a in record.get("authors", [])],
                    year=int(year) if year not in (None, "") else None,
                    doi=doi,
                    citation_count=int(record.get("citation_count", 0)),
                    body_text=str(record.get("body_text", "")),
                )
            except (TypeError, ValueError) as exc:
                rejections.append(Rejection(dict(record), f"malformed record: {exc}"))
                continue
            if paper.id in self.papers:
                rejections.append(Rejection(dict(record), f"duplicate paper id: {paper.id}"))
                continue
            self.papers[paper.id] = paper
            self._persist(paper)
            created.append(paper)
            if doi:
                seen_dois.add(doi.casefold())
            else:
                seen_titles.add(title.casefold())
        return created, rejections

    def import_bibtex(self, text: str) -> tuple[list[Paper], list[Rejection]]:
        return self.import_records(parse_bibtex(text))

    def remove_paper(self, paper_id: str) -> None:
        self.require_paper(paper_id)
        del self.papers[paper_id]
        if self._store is not None:
            self._store.delete("paper", paper_id)

    # -- votes --------------------------------------------------------------

    def cast_vote(self, reviewer_id: str, paper_id: str, value: str, note: str = "") -> Vote:
        """Upsert: one vote per (reviewer, paper); re-voting replaces."""
        paper = self.require_paper(paper_id)
        if value not in VOTE_VALUES:
            raise ValidationError("vote must be 'include' or 'exclude'", value=value)
        if not reviewer_id:
            raise ValidationError("reviewer_id must be non-empty")
        vote = Vote(reviewer_id, value, note)
        for i, existing in enumerate(paper.votes):
            if existing.reviewer_id == reviewer_id:
                paper.votes[i] = vote
                break
        else:
            paper.votes.append(vote)
        self._persist(paper)
        return vote

    def papers_by_min_votes(self, min_positive: int) -> list[Paper]:
        """Papers with at least ``min_positive`` include votes, ordered by
        include-vote count descending, then title ascending."""
        if min_positive < 0:
            raise ValidationError("min_positive must be >= 0", min_positive=min_positive)
        selected = [p for p in self.papers.values() if p.positive_votes() >= min_positive]
        selected.sort(key=lambda p: (-p.positive_votes(), p.title.casefold(), p.id))
        return selected

    # -- tags -----------------------------------------------------------------

    def tag_paper(self, paper_id: str, keyword: str, note: str = "") -> tuple[Tag, bool]:
        """Upsert by case-folded keyword; returns (tag, changed)."""
        paper = self.require_paper(paper_id)
        keyword = (keyword or "").strip()
        if not keyword:
            raise ValidationError("tag keyword must be non-empty")
        folded = keyword.casefold()
        tag = Tag(keyword, note)
        for i, existing in enumerate(paper.tags):
            if existing.keyword.casefold() == folded:
                if (existing.keyword, existing.note) == (keyword, note):
                    return existing, False
                paper.tags[i] = tag
                self._persist(paper)
                return tag, True
        paper.tags.append(tag)
        self._persist(paper)
        return tag, True

    def untag_paper(self, paper_id: str, keyword: str) -> bool:
        paper = self.require_paper(paper_id)
        folded = (keyword or "").casefold()
        for i, existing in enumerate(paper.tags):
            if existing.keyword.casefold() == folded:
                del paper.tags[i]
                self._persist(paper)
                return True
        return False

    # -- tag import ------------------------------------------------------------

    def import_tags_as_concepts(
        self, taxonomy: "Taxonomy", dimension_id: str, min_tag_count: int = 1
    ) -> list[tuple["Concept", list["Mapping"]]]:
        """Turn frequently used tags into concepts of the given dimension.

        Each distinct case-folded keyword used on at least ``min_tag_count``
        papers becomes a concept named by its most frequent original casing
        (ties: first seen); every tagged paper is mapped manually with
        occurrence_count 0. Idempotent.
        """
        if min_tag_count < 1:
            raise ValidationError("min_tag_count must be >= 1", min_tag_count=min_tag_count)
        casings: dict[str, Counter] = {}
        first_seen: dict[str, int] = {}
        tagged: dict[str, list[Paper]] = {}
        order = 0
        for paper in self.papers.values():
            for tag in paper.tags:
                folded = tag.keyword.casefold()
                if folded not in casings:
                    casings[folded] = Counter()
                    first_seen[folded] = order
                    tagged[folded] = []
                order += 1
                casings[folded][tag.keyword] += 1
                tagged[folded].append(paper)
        groups: list[tuple[str, list[Paper]]] = []
        for folded in sorted(casings, key=lambda k: first_seen[k]):
            papers = tagged[folded]
            if len(papers) < min_tag_count:
                continue
            counter = casings[folded]
            best = max(counter.most_common(), key=lambda item: item[1])
            # ties resolve to the casing seen first
            top = [c for c, n in counter.items() if n == best[1]]
            display = top[0]
            groups.append((display, papers))
        return taxonomy.import_keyword_concepts(dimension_id, groups)


# -- BibTeX subset -------------------------------------------------------------

_ENTRY_START = re.compile(r"@\s*(\w+)\s*\{", re.IGNORECASE)
_FIELD_NAME = re.compile(r"\s*(\w+)\s*=\s*")


def _strip_braces(value: str) -> str:
    value = value.strip()
    while len(value) >= 2 and value[0] == "{" and value[-1] == "}":
        value = value[1:-1].strip()
    value = value.replace("{", "").replace("}", "")
    return re.sub(r"\s+", " ", value)


def parse_bibtex(text: str) -> list[dict[str, Any]]:
    """Parse a pragmatic BibTeX subset: title, author, year, doi.

    Unknown fields are ignored; values may be braced, quoted, or bare.
    """
    records: list[dict[str, Any]] = []
    pos = 0
    while True:
        start = _ENTRY_START.search(text, pos)
        if start is None:
            break
        i = start.end()
        # skip the citation key
        while i < len(text) and text[i] not in ",}":
            i += 1
        if i < len(text) and text[i] == ",":
            i += 1
        fields: dict[str, str] = {}
        while i < len(text):
            if text[i] == "}":
                i += 1
                break
            name_match = _FIELD_NAME.match(text, i)
            if name_match is None:
                comma = text.find(",", i)
                brace = text.find("}", i)
                if brace == -1:
                    i = len(text)
                    break
                if comma != -1 and comma < brace:
                    i = comma + 1
                    continue
                i = brace + 1
                break
            name = name_match.group(1).casefold()
            i = name_match.end()
            value_chars: list[str] = []
            if i < len(text) and text[i] == "{":
                depth = 1
                i += 1
                while i < len(text):
                    ch = text[i]
                    if ch == "{":
                        depth += 1
                    elif ch == "}":
                        depth -= 1
                        if depth == 0:
                            i += 1
                            break
                    value_chars.append(ch)
                    i += 1
            elif i < len(text) and text[i] == '"':
                i += 1
                while i < len(text) and text[i] != '"':
                    value_chars.append(text[i])
                    i += 1
                i += 1
            else:
                while i < len(text) and text[i] not in ",}":
                    value_chars.append(text[i])
                    i += 1
            fields[name] = _strip_braces("".join(value_chars))
            while i < len(text) and text[i] in ", \t\r\n":
                if text[i] == ",":
                    i += 1
                    break
                i += 1
        record: dict[str, Any] = {}
        if "title" in fields:
            record["title"] = fields["title"]
        if "author" in fields:
            record["authors"] = [a.strip() for a in fields["author"].split(" and ") if a.strip()]
        if "year" in fields:
            year_match = re.search(r"\d{4}", fields["year"])
            if year_match:
                record["year"] = int(year_match.group(0))
        if "doi" in fields:
            record["doi"] = fields["doi"]
        records.append(record)
        pos = i
    return records
