import json
import random

import pytest

from helpers import random_taxonomy
from taxlab import canonical_dumps, taxonomy_from_document, taxonomy_to_document
from taxlab.errors import ValidationError


class TestDocumentShape:
    def test_top_level_keys(self):
        tax = random_taxonomy(random.Random(1), with_reviews=True)
        doc = taxonomy_to_document(tax)
        assert doc["format"] == "taxlab-document"
        assert doc["format_version"] == 1
        assert set(doc) == {
            "format",
            "format_version",
            "taxonomy",
            "dimensions",
            "concepts",
            "relations",
            "synonyms",
            "papers",
            "mappings",
            "positions",
        }
        assert doc["taxonomy"]["version"] == tax.version
        assert doc["taxonomy"]["id"] == tax.id

    def test_canonical_dumps_is_sorted_and_newline_terminated(self):
        text = canonical_dumps({"b": 1, "a": [2, {"z": 0, "y": "ü"}]})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert "ü" in text  # ensure_ascii off

    def test_json_serializable(self):
        tax = random_taxonomy(random.Random(2), with_reviews=True)
        json.loads(canonical_dumps(taxonomy_to_document(tax)))


class TestRoundTrip:
    def test_byte_identical(self):
        for seed in range(30):
            tax = random_taxonomy(random.Random(seed), with_reviews=True)
            first = canonical_dumps(taxonomy_to_document(tax))
            clone = taxonomy_from_document(json.loads(first))
            second = canonical_dumps(taxonomy_to_document(clone))
            assert first == second

    def test_preserves_state_exactly(self):
        tax = random_taxonomy(random.Random(7), with_reviews=True)
        tax.set_public(True)
        clone = taxonomy_from_document(taxonomy_to_document(tax))
        assert clone.id == tax.id
        assert clone.version == tax.version
        assert clone.public is True
        assert clone.parent_id == tax.parent_id
        assert set(clone.concepts) == set(tax.concepts)
        assert set(clone.mappings) == set(tax.mappings)
        assert clone.positions == tax.positions
        assert sorted((s.concept_id, s.term) for s in clone.synonyms) == sorted(
            (s.concept_id, s.term) for s in tax.synonyms
        )
        clone.validate()

    def test_import_does_not_bump_version(self):
        tax = random_taxonomy(random.Random(9))
        doc = taxonomy_to_document(tax)
        assert taxonomy_from_document(doc).version == tax.version

    def test_fork_lineage_survives(self):
        tax = random_taxonomy(random.Random(3))
        fork = tax.fork()
        clone = taxonomy_from_document(taxonomy_to_document(fork))
        assert clone.parent_id == tax.id


class TestRejection:
    def good_doc(self):
        return taxonomy_to_document(random_taxonomy(random.Random(4)))

    def test_wrong_format_marker(self):
        doc = self.good_doc()
        doc["format"] = "something-else"
        with pytest.raises(ValidationError):
            taxonomy_from_document(doc)

    def test_future_format_version(self):
        doc = self.good_doc()
        doc["format_version"] = 99
        with pytest.raises(ValidationError):
            taxonomy_from_document(doc)

    def test_missing_section(self):
        doc = self.good_doc()
        del doc["concepts"]
        with pytest.raises(ValidationError):
            taxonomy_from_document(doc)

    def test_dangling_mapping_caught_by_validate(self):
        doc = self.good_doc()
        doc["mappings"].append(
            {
                "paper_id": "ghost",
                "concept_id": "ghost",
                "provenance": "manual",
                "occurrence_count": 0,
            }
        )
        with pytest.raises(ValidationError):
            taxonomy_from_document(doc)

    def test_non_dict_input(self):
        with pytest.raises(ValidationError):
            taxonomy_from_document(["not", "a", "document"])
