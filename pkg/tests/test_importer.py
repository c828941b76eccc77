import pytest

from taxlab import (
    MatchConfig,
    Paper,
    Taxonomy,
    conformity,
    count_occurrences,
    run_conformity_experiment,
    suggest_mappings,
)
from taxlab.errors import UndefinedBaselineError, ValidationError
from taxlab.importer import report_to_csv


def cfg(method, **kw):
    return MatchConfig(method=method, **kw)


class TestMatchConfig:
    def test_defaults_per_method(self):
        assert cfg("dice").threshold == 0.9
        assert cfg("levenshtein").threshold == 1.0
        assert cfg("fuzzysort").threshold == -150.0

    def test_unknown_method(self):
        with pytest.raises(ValidationError):
            cfg("soundex")

    def test_threshold_ranges(self):
        with pytest.raises(ValidationError):
            cfg("dice", threshold=1.5)
        with pytest.raises(ValidationError):
            cfg("levenshtein", threshold=-1)
        with pytest.raises(ValidationError):
            cfg("fuzzysort", threshold=10)
        with pytest.raises(ValidationError):
            cfg("regex", min_occurrences=0)


class TestCounting:
    def test_regex_whole_word(self):
        total, matched = count_occurrences("hash hash hashing", ["hash"], cfg("regex"))
        assert total == 2 and matched == [("hash", 2)]

    def test_levenshtein_window(self):
        total, _ = count_occurrences("hash hash hashing", ["hash"], cfg("levenshtein"))
        assert total == 2

    def test_levenshtein_tolerates_one_edit(self):
        total, _ = count_occurrences("hashes hash", ["hash"], cfg("levenshtein"))
        assert total == 1  # "hashes" is two edits away, "hash" matches

    def test_regex_is_non_overlapping_but_windows_overlap(self):
        assert count_occurrences("aa aa aa", ["aa aa"], cfg("regex"))[0] == 1
        assert count_occurrences("aa aa aa", ["aa aa"], cfg("levenshtein"))[0] == 2

    def test_regex_case_insensitive_phrase(self):
        total, _ = count_occurrences("Virtual Machine vs virtual  machine", ["virtual machine"], cfg("regex"))
        assert total == 2

    def test_regex_respects_boundaries(self):
        assert count_occurrences("rehash hash hashes", ["hash"], cfg("regex"))[0] == 1

    def test_hyphenated_text_matches_spaced_term(self):
        total, _ = count_occurrences(
            "self-checksumming code is code", ["self checksumming"], cfg("levenshtein")
        )
        assert total >= 1

    def test_hyphenated_term_joined_form(self):
        total, _ = count_occurrences(
            "selfchecksumming everywhere", ["Self-Checksumming"], cfg("levenshtein")
        )
        assert total == 1

    def test_dice_window(self):
        total, _ = count_occurrences("tamper proofing", ["tamper proofing"], cfg("dice"))
        assert total == 1

    def test_fuzzysort_counts_subsequence_windows(self):
        total, _ = count_occurrences("tamper", ["tp"], cfg("fuzzysort", threshold=-10.0))
        assert total == 1
        total, _ = count_occurrences("tamper", ["tp"], cfg("fuzzysort", threshold=-5.0))
        assert total == 0

    def test_empty_term(self):
        assert count_occurrences("anything", [""], cfg("regex"))[0] == 0
        assert count_occurrences("anything", ["..."], cfg("levenshtein"))[0] == 0


def build_taxonomy():
    tax = Taxonomy.create("match target")
    dim = next(iter(tax.dimensions))
    hashing = tax.add_concept(dim, "hashing")
    tamper = tax.add_concept(dim, "tamper proofing")
    tax.add_synonym(hashing.id, "checksums")
    return tax, hashing, tamper


class TestSuggestions:
    def test_gate_and_order(self):
        tax, hashing, tamper = build_taxonomy()
        paper = Paper(
            id="p1",
            title="x",
            body_text="hashing hashing hashing tamper proofing tamper proofing tamper proofing tamper proofing",
        )
        out = suggest_mappings(paper, tax, cfg("regex", min_occurrences=3))
        assert [(s.concept_id, s.occurrence_count) for s in out] == [(tamper.id, 4), (hashing.id, 3)]

    def test_min_occurrences_gate(self):
        tax, hashing, _ = build_taxonomy()
        paper = Paper(id="p1", title="x", body_text="hashing hashing")
        assert suggest_mappings(paper, tax, cfg("regex", min_occurrences=3)) == []
        out = suggest_mappings(paper, tax, cfg("regex", min_occurrences=2))
        assert [s.concept_id for s in out] == [hashing.id]

    def test_synonyms_pool_counts(self):
        tax, hashing, _ = build_taxonomy()
        paper = Paper(id="p1", title="x", body_text="hashing checksums hashing")
        with_syn = suggest_mappings(paper, tax, cfg("regex", min_occurrences=3))
        assert [(s.concept_id, s.occurrence_count) for s in with_syn] == [(hashing.id, 3)]
        without = suggest_mappings(
            paper, tax, cfg("regex", min_occurrences=3, use_synonyms=False)
        )
        assert without == []

    def test_title_abstract_fallback(self):
        tax, hashing, _ = build_taxonomy()
        paper = Paper(id="p1", title="hashing hashing", abstract="hashing again")
        out = suggest_mappings(paper, tax, cfg("regex", min_occurrences=3))
        assert [s.concept_id for s in out] == [hashing.id]


class TestConformity:
    def test_percentage(self):
        auto = {("p1", "c1"), ("p2", "c1"), ("p3", "c9")}
        manual = {("p1", "c1"), ("p2", "c1"), ("p2", "c2"), ("p4", "c4")}
        assert conformity(auto, manual) == 50.0

    def test_empty_baseline_is_undefined(self):
        with pytest.raises(UndefinedBaselineError):
            conformity({("p", "c")}, set())

    def test_extra_auto_pairs_do_not_help(self):
        manual = {("p1", "c1")}
        assert conformity({("p1", "c1"), ("x", "y")}, manual) == 100.0
        assert conformity({("x", "y")}, manual) == 0.0


class TestExperimentGrid:
    def test_grid_shape_and_monotonicity(self):
        tax, hashing, tamper = build_taxonomy()
        papers = [
            Paper(id="p1", title="a", body_text="hashing " * 6),
            Paper(id="p2", title="b", body_text="tamper proofing " * 4),
            Paper(id="p3", title="c", body_text="hashing nothing else"),
        ]
        baseline = {("p1", hashing.id), ("p2", tamper.id), ("p3", hashing.id)}
        cells = run_conformity_experiment(papers, tax, baseline)
        assert [(c.method, c.min_occurrences) for c in cells[:4]] == [
            ("regex", 10),
            ("regex", 5),
            ("regex", 3),
            ("regex", 1),
        ]
        assert len(cells) == 16
        by_method = {}
        for c in cells:
            by_method.setdefault(c.method, []).append(c)
        for method_cells in by_method.values():
            counts = [c.auto_pairs for c in method_cells]  # moc 10,5,3,1
            assert counts == sorted(counts)
            assert all(c.manual_pairs == 3 for c in method_cells)

    def test_csv_format(self):
        tax, hashing, _ = build_taxonomy()
        papers = [Paper(id="p1", title="a", body_text="hashing " * 3)]
        cells = run_conformity_experiment(papers, tax, {("p1", hashing.id)}, moc_values=(1,), methods=("regex",))
        text = report_to_csv(cells)
        lines = text.strip().split("\n")
        assert lines[0] == "method,moc,auto_pairs,manual_pairs,intersection,conformity_pct"
        assert lines[1] == "regex,1,1,1,1,100.00"
