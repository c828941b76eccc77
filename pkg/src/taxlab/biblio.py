"""Bibliographic records: papers, screening votes, tags.

These are plain data holders shared by the review board and by taxonomies
(a taxonomy registers snapshot copies of the papers it maps).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VOTE_VALUES = ("include", "exclude")


@dataclass
class Vote:
    reviewer_id: str
    value: str  # "include" | "exclude"
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"reviewer_id": self.reviewer_id, "value": self.value, "note": self.note}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Vote":
        return cls(reviewer_id=str(d["reviewer_id"]), value=str(d["value"]), note=str(d.get("note", "")))


@dataclass
class Tag:
    keyword: str
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"keyword": self.keyword, "note": self.note}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Tag":
        return cls(keyword=str(d["keyword"]), note=str(d.get("note", "")))


@dataclass
class Paper:
    id: str
    title: str
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    year: int | None = None
    doi: str | None = None
    citation_count: int = 0
    body_text: str = ""
    tags: list[Tag] = field(default_factory=list)  # unique by case-folded keyword
    votes: list[Vote] = field(default_factory=list)  # at most one per reviewer

    def positive_votes(self) -> int:
        return sum(1 for v in self.votes if v.value == "include")

    def has_tag(self, keyword: str) -> bool:
        folded = keyword.casefold()
        return any(t.keyword.casefold() == folded for t in self.tags)

    def matching_text(self) -> str:
        """Text used for occurrence counting: body, else title + abstract."""
        if self.body_text.strip():
            return self.body_text
        return f"{self.title}\n{self.abstract}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "authors": list(self.authors),
            "year": self.year,
            "doi": self.doi,
            "citation_count": self.citation_count,
            "body_text": self.body_text,
            "tags": [t.to_dict() for t in self.tags],
            "votes": [v.to_dict() for v in self.votes],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Paper":
        year = d.get("year")
        return cls(
            id=str(d["id"]),
            title=str(d["title"]),
            abstract=str(d.get("abstract", "")),
            authors=[str(a) for a in d.get("authors", [])],
            year=int(year) if year is not None else None,
            doi=d["doi"] if d.get("doi") is not None else None,
            citation_count=int(d.get("citation_count", 0)),
            body_text=str(d.get("body_text", "")),
            tags=[Tag.from_dict(t) for t in d.get("tags", [])],
            votes=[Vote.from_dict(v) for v in d.get("votes", [])],
        )

    def clone(self) -> "Paper":
        return Paper.from_dict(self.to_dict())
