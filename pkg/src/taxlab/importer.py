"""Keyword-driven literature import.

Counts term occurrences in paper text with one of four methods, turns
counts into mapping suggestions gated by a minimal occurrence count, and
measures conformity of automatic mappings against a manual baseline.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .biblio import Paper
from .errors import UndefinedBaselineError, ValidationError
from .model import Taxonomy
from .similarity import (
    dice_similarity,
    fuzzy_score,
    levenshtein_within,
    normalize,
    normalize_term,
)

METHODS = ("regex", "dice", "levenshtein", "fuzzysort")
DEFAULT_THRESHOLDS = {"dice": 0.9, "levenshtein": 1.0, "fuzzysort": -150.0}
DEFAULT_MIN_OCCURRENCES = 3


@dataclass
class MatchConfig:
    """Configuration for occurrence counting and suggestion.

    ``threshold`` semantics depend on the method: minimum similarity for
    dice, maximum edit distance for levenshtein, minimum (negative) score
    for fuzzysort; unused for regex. None picks the method default.
    """

    method: str = "levenshtein"
    threshold: float | None = None
    min_occurrences: int = DEFAULT_MIN_OCCURRENCES
    use_synonyms: bool = True

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValidationError("unknown matching method", method=self.method)
        if self.threshold is None:
            self.threshold = DEFAULT_THRESHOLDS.get(self.method)
        if self.method == "dice" and not (0.0 <= float(self.threshold) <= 1.0):
            raise ValidationError("dice threshold must be within [0, 1]", threshold=self.threshold)
        if self.method == "levenshtein" and self.threshold < 0:
            raise ValidationError("levenshtein threshold must be >= 0", threshold=self.threshold)
        if self.method == "fuzzysort" and self.threshold > 0:
            raise ValidationError("fuzzysort threshold must be <= 0", threshold=self.threshold)
        if self.min_occurrences < 1:
            raise ValidationError(
                "min_occurrences must be >= 1", min_occurrences=self.min_occurrences
            )


@dataclass
class MappingSuggestion:
    paper_id: str
    concept_id: str
    occurrence_count: int
    matched_terms: list[tuple[str, int]]
    method: str

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "concept_id": self.concept_id,
            "occurrence_count": self.occurrence_count,
            "matched_terms": [list(t) for t in self.matched_terms],
            "method": self.method,
        }


def _regex_count(text: str, term: str) -> int:
    words = term.split()
    if not words:
        return 0
    pattern = r"\b" + r"\s+".join(re.escape(w) for w in words) + r"\b"
    return sum(1 for _ in re.finditer(pattern, text, re.IGNORECASE))


def _window_count(tokens: Sequence[str], term: str, method: str, threshold: float) -> int:
    term_tokens = normalize_term(term)
    if not term_tokens:
        return 0
    w = len(term_tokens)
    if w > len(tokens):
        return 0
    joined_term = "".join(term_tokens)
    count = 0
    if method == "levenshtein":
        limit = int(threshold)
        for i in range(len(tokens) - w + 1):
            window = "".join(tokens[i : i + w])
            if levenshtein_within(window, joined_term, limit):
                count += 1
    elif method == "dice":
        for i in range(len(tokens) - w + 1):
            window = "".join(tokens[i : i + w])
            if dice_similarity(window, joined_term) >= threshold:
                count += 1
    else:  # fuzzysort
        for i in range(len(tokens) - w + 1):
            window = "".join(tokens[i : i + w])
            score = fuzzy_score(joined_term, window)
            if score is not None and score >= threshold:
                count += 1
    return count


def count_occurrences(
    text: str, terms: Iterable[str], config: MatchConfig
) -> tuple[int, list[tuple[str, int]]]:
    """Count occurrences of each term in the text under the config's method.

    regex counts case-insensitive whole-word (phrase) matches on the raw
    text; the other methods slide a token window of the term's width over
    the normalized text and compare joined forms, so overlapping windows
    each count. Returns (total, [(term, count) for terms that matched]).
    """
    matched: list[tuple[str, int]] = []
    tokens: list[str] | None = None
    for term in terms:
        if config.method == "regex":
            n = _regex_count(text, term)
        else:
            if tokens is None:
                tokens = normalize(text)
            n = _window_count(tokens, term, config.method, float(config.threshold))
        if n > 0:
            matched.append((term, n))
    return sum(n for _, n in matched), matched


def suggest_mappings(
    paper: Paper, taxonomy: Taxonomy, config: MatchConfig
) -> list[MappingSuggestion]:
    """Suggest concepts for a paper: each concept whose terms (name plus
    synonyms when enabled) occur at least ``min_occurrences`` times in the
    paper text. Sorted by occurrence count descending (name, id tiebreak)."""
    text = paper.matching_text()
    suggestions: list[MappingSuggestion] = []
    for concept in taxonomy.concepts.values():
        terms = [concept.name]
        if config.use_synonyms:
            terms.extend(taxonomy.synonyms_of(concept.id))
        total, matched = count_occurrences(text, terms, config)
        if total >= config.min_occurrences:
            suggestions.append(
                MappingSuggestion(paper.id, concept.id, total, matched, config.method)
            )
    suggestions.sort(
        key=lambda s: (-s.occurrence_count, taxonomy.concepts[s.concept_id].name.casefold(), s.concept_id)
    )
    return suggestions


def conformity(
    auto_pairs: Iterable[tuple[str, str]], manual_pairs: Iterable[tuple[str, str]]
) -> float:
    """Percentage of manual (paper, concept) pairs recovered automatically:
    100 * |auto & manual| / |manual|. Undefined for an empty baseline."""
    manual = set(manual_pairs)
    if not manual:
        raise UndefinedBaselineError("conformity is undefined for an empty manual baseline")
    auto = set(auto_pairs)
    return 100.0 * len(auto & manual) / len(manual)


@dataclass
class ConformityCell:
    method: str
    min_occurrences: int
    auto_pairs: int
    manual_pairs: int
    intersection: int
    conformity_pct: float

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "moc": self.min_occurrences,
            "auto_pairs": self.auto_pairs,
            "manual_pairs": self.manual_pairs,
            "intersection": self.intersection,
            "conformity_pct": self.conformity_pct,
        }


def run_conformity_experiment(
    corpus: Sequence[Paper],
    taxonomy: Taxonomy,
    baseline: Iterable[tuple[str, str]],
    moc_values: Sequence[int] = (10, 5, 3, 1),
    methods: Sequence[str] = METHODS,
    use_synonyms: bool = True,
) -> list[ConformityCell]:
    """Method x MOC grid of conformity against a manual baseline.

    Counts are computed once per method at the default thresholds; the MOC
    axis only re-gates them.
    """
    manual = set(baseline)
    if not manual:
        raise UndefinedBaselineError("conformity experiment needs a non-empty baseline")
    for moc in moc_values:
        if moc < 1:
            raise ValidationError("MOC values must be >= 1", moc=moc)
    cells: list[ConformityCell] = []
    for method in methods:
        probe = MatchConfig(method=method, min_occurrences=1, use_synonyms=use_synonyms)
        counts: dict[tuple[str, str], int] = {}
        for paper in corpus:
            for s in suggest_mappings(paper, taxonomy, probe):
                counts[(s.paper_id, s.concept_id)] = s.occurrence_count
        for moc in moc_values:
            auto = {pair for pair, n in counts.items() if n >= moc}
            cells.append(
                ConformityCell(
                    method=method,
                    min_occurrences=int(moc),
                    auto_pairs=len(auto),
                    manual_pairs=len(manual),
                    intersection=len(auto & manual),
                    conformity_pct=100.0 * len(auto & manual) / len(manual),
                )
            )
    return cells


def report_to_csv(cells: Sequence[ConformityCell]) -> str:
    """Spreadsheet-ready grid: method, moc, auto_pairs, manual_pairs,
    intersection, conformity_pct."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["method", "moc", "auto_pairs", "manual_pairs", "intersection", "conformity_pct"])
    for cell in cells:
        writer.writerow(
            [
                cell.method,
                cell.min_occurrences,
                cell.auto_pairs,
                cell.manual_pairs,
                cell.intersection,
                f"{cell.conformity_pct:.2f}",
            ]
        )
    return out.getvalue()
