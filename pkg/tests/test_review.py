import pytest

from taxlab import DocumentStore, Paper, ReviewBoard, Taxonomy
from taxlab.errors import NotFoundError, ValidationError
from taxlab.review import parse_bibtex

BIB = """
@article{collberg97,
  title   = {A Taxonomy of Obfuscating Transformations},
  author  = {Collberg, Christian and Thomborson, Clark and Low, Douglas},
  year    = {1997},
  doi     = {10.1000/demo.1},
}

@inproceedings{chang2001,
  title  = "Protecting Software Code by {Guards}",
  author = "Chang, Hoi and Atallah, Mikhail",
  year   = 2001
}

@misc{no_title_entry,
  author = {Anonymous},
  year = {2020}
}
"""


class TestBibtexParsing:
    def test_fields_and_value_styles(self):
        records = parse_bibtex(BIB)
        assert len(records) == 3
        first = records[0]
        assert first["title"] == "A Taxonomy of Obfuscating Transformations"
        assert first["doi"] == "10.1000/demo.1"
        assert first["year"] == 1997
        assert first["authors"] == ["Collberg, Christian", "Thomborson, Clark", "Low, Douglas"]
        second = records[1]
        assert second["title"] == "Protecting Software Code by Guards"  # inner braces stripped
        assert second["year"] == 2001

    def test_garbage_between_entries_is_skipped(self):
        records = parse_bibtex("random preamble\n" + BIB + "\n% trailing comment")
        assert len(records) == 3


class TestImport:
    def test_batch_partial_success(self):
        board = ReviewBoard()
        created, rejected = board.import_bibtex(BIB)
        assert [p.title for p in created] == [
            "A Taxonomy of Obfuscating Transformations",
            "Protecting Software Code by Guards",
        ]
        assert len(rejected) == 1 and rejected[0].reason == "missing title"

    def test_doi_dedupe_case_insensitive(self):
        board = ReviewBoard()
        board.import_records([{"title": "One", "doi": "10.1/X"}])
        created, rejected = board.import_records([{"title": "Other", "doi": "10.1/x"}])
        assert created == [] and "duplicate doi" in rejected[0].reason

    def test_title_dedupe_only_among_doiless(self):
        board = ReviewBoard()
        board.import_records([{"title": "Same Name", "doi": "10.1/a"}])
        created, _ = board.import_records([{"title": "same name"}])
        assert len(created) == 1  # DOI record does not block the DOI-less title
        created2, rejected2 = board.import_records([{"title": "SAME NAME"}])
        assert created2 == [] and "duplicate title" in rejected2[0].reason

    def test_malformed_year_rejected_individually(self):
        board = ReviewBoard()
        created, rejected = board.import_records(
            [{"title": "Good"}, {"title": "Bad", "year": "two thousand"}]
        )
        assert len(created) == 1 and "malformed record" in rejected[0].reason

    def test_persists_to_store_and_reloads(self, tmp_path):
        store = DocumentStore(tmp_path)
        board = ReviewBoard(store)
        board.import_records([{"id": "p1", "title": "Persisted"}])
        board.cast_vote("alice", "p1", "include")
        reloaded = ReviewBoard(DocumentStore(tmp_path))
        assert reloaded.papers["p1"].title == "Persisted"
        assert reloaded.papers["p1"].positive_votes() == 1


class TestVotes:
    def make_board(self):
        board = ReviewBoard()
        board.import_records([{"id": f"p{i}", "title": f"Paper {i}"} for i in range(4)])
        return board

    def test_upsert_per_reviewer(self):
        board = self.make_board()
        board.cast_vote("alice", "p0", "include")
        board.cast_vote("alice", "p0", "exclude", "changed my mind")
        votes = board.papers["p0"].votes
        assert len(votes) == 1 and votes[0].value == "exclude"

    def test_invalid_vote_value(self):
        board = self.make_board()
        with pytest.raises(ValidationError):
            board.cast_vote("alice", "p0", "maybe")
        with pytest.raises(NotFoundError):
            board.cast_vote("alice", "ghost", "include")

    def test_shortlist_threshold_and_order(self):
        board = self.make_board()
        for reviewer in ("a", "b", "c"):
            board.cast_vote(reviewer, "p2", "include")
        board.cast_vote("a", "p1", "include")
        board.cast_vote("b", "p1", "exclude")
        board.cast_vote("a", "p3", "include")
        assert [p.id for p in board.papers_by_min_votes(1)] == ["p2", "p1", "p3"]
        assert [p.id for p in board.papers_by_min_votes(2)] == ["p2"]
        assert [p.id for p in board.papers_by_min_votes(0)] == ["p2", "p1", "p3", "p0"]

    def test_threshold_monotone(self):
        board = self.make_board()
        board.cast_vote("a", "p0", "include")
        board.cast_vote("b", "p0", "include")
        board.cast_vote("a", "p1", "include")
        previous = None
        for k in range(0, 5):
            ids = {p.id for p in board.papers_by_min_votes(k)}
            if previous is not None:
                assert ids <= previous
            previous = ids


class TestTags:
    def make_board(self):
        board = ReviewBoard()
        board.import_records([{"id": f"p{i}", "title": f"Paper {i}"} for i in range(5)])
        return board

    def test_upsert_by_folded_keyword(self):
        board = self.make_board()
        tag, changed = board.tag_paper("p0", "Obfuscation")
        assert changed
        same, changed = board.tag_paper("p0", "Obfuscation")
        assert not changed
        recased, changed = board.tag_paper("p0", "OBFUSCATION", "note")
        assert changed and len(board.papers["p0"].tags) == 1
        assert board.papers["p0"].tags[0].keyword == "OBFUSCATION"

    def test_untag(self):
        board = self.make_board()
        board.tag_paper("p0", "Hashing")
        assert board.untag_paper("p0", "hashing") is True
        assert board.untag_paper("p0", "hashing") is False

    def test_import_tags_as_concepts(self):
        board = self.make_board()
        # "guards" appears 3x with casings Guards, Guards, guards -> "Guards" wins
        board.tag_paper("p0", "Guards")
        board.tag_paper("p1", "Guards")
        board.tag_paper("p2", "guards")
        board.tag_paper("p3", "Hashing")
        tax = Taxonomy.create("T")
        dim = next(iter(tax.dimensions.values()))
        out = board.import_tags_as_concepts(tax, dim.id, min_tag_count=2)
        assert [c.name for c, _ in out] == ["Guards"]
        concept = out[0][0]
        assert {m.paper_id for m in out[0][1]} == {"p0", "p1", "p2"}
        assert all(m.provenance == "manual" for m in out[0][1])
        # papers got snapshotted into the taxonomy
        assert {"p0", "p1", "p2"} <= set(tax.papers)

    def test_casing_tie_resolves_to_first_seen(self):
        board = self.make_board()
        board.tag_paper("p0", "ssa")
        board.tag_paper("p1", "SSA")
        tax = Taxonomy.create("T")
        dim = next(iter(tax.dimensions.values()))
        out = board.import_tags_as_concepts(tax, dim.id)
        names = [c.name for c, _ in out]
        assert names == ["ssa"]

    def test_idempotent_against_taxonomy(self):
        board = self.make_board()
        board.tag_paper("p0", "Guards")
        tax = Taxonomy.create("T")
        dim = next(iter(tax.dimensions.values()))
        board.import_tags_as_concepts(tax, dim.id)
        version = tax.version
        board.import_tags_as_concepts(tax, dim.id)
        assert tax.version == version
        assert len(tax.concepts) == 1


class TestRemove:
    def test_remove_paper(self, tmp_path):
        store = DocumentStore(tmp_path)
        board = ReviewBoard(store)
        board.import_records([{"id": "p1", "title": "T"}])
        board.remove_paper("p1")
        assert board.papers == {}
        assert not store.exists("paper", "p1")
        with pytest.raises(NotFoundError):
            board.remove_paper("p1")
