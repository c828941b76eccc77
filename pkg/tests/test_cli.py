import json
import socket

import pytest

from taxlab import (
    DocumentStore,
    Paper,
    Taxonomy,
    canonical_dumps,
    taxonomy_to_document,
)
from taxlab.cli import main
from taxlab.corpus import write_corpus


@pytest.fixture(autouse=True)
def no_ambient_storage(monkeypatch):
    monkeypatch.delenv("TAXLAB_STORAGE_PATH", raising=False)


def write_taxonomy_file(tmp_path, name="Demo"):
    tax = Taxonomy.create(name)
    dim = next(iter(tax.dimensions.values()))
    tax.add_concept(dim.id, "obfuscation")
    path = tmp_path / "tax.json"
    path.write_text(canonical_dumps(taxonomy_to_document(tax)), encoding="utf-8")
    return tax, path


def write_demo_corpus(tmp_path):
    papers = [
        Paper(id="p1", title="one", body_text="obfuscation seen, obfuscation used, obfuscation wins"),
        Paper(id="p2", title="two", body_text="nothing relevant here"),
    ]
    corpus_dir = tmp_path / "corpus"
    write_corpus(corpus_dir, papers)
    return corpus_dir


class TestUsageErrors:
    def test_no_arguments(self, capsys):
        assert main([]) == 1
        err = capsys.readouterr().err
        assert "usage" in err

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 1
        assert "[usage]" in capsys.readouterr().err

    def test_missing_required_flag(self, capsys):
        assert main(["export"]) == 1
        assert "--taxonomy" in capsys.readouterr().err

    def test_bad_sizes_spec(self, capsys):
        assert main(["bench", "matrix", "--sizes", "banana"]) == 2
        assert "[validation]" in capsys.readouterr().err

    def test_bad_moc_list(self, capsys):
        assert main(["experiment", "conformity", "--synthetic", "--moc", "3,0"]) == 2
        assert "[validation]" in capsys.readouterr().err


class TestExportImport:
    def test_export_file_to_stdout(self, tmp_path, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        assert main(["export", "--taxonomy", str(path)]) == 0
        out = capsys.readouterr().out
        assert json.loads(out)["taxonomy"]["id"] == tax.id
        assert out == path.read_text(encoding="utf-8")  # canonical both ways

    def test_import_then_export_is_byte_identical(self, tmp_path, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        storage = tmp_path / "store"
        assert main(["import-taxonomy", "--file", str(path), "--storage", str(storage)]) == 0
        capsys.readouterr()
        out_file = tmp_path / "roundtrip.json"
        assert (
            main(
                [
                    "export",
                    "--taxonomy",
                    tax.id,
                    "--storage",
                    str(storage),
                    "--out",
                    str(out_file),
                ]
            )
            == 0
        )
        assert out_file.read_bytes() == path.read_bytes()

    def test_import_existing_needs_replace(self, tmp_path, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        storage = tmp_path / "store"
        main(["import-taxonomy", "--file", str(path), "--storage", str(storage)])
        assert main(["import-taxonomy", "--file", str(path), "--storage", str(storage)]) == 2
        assert "--replace" in capsys.readouterr().err
        assert (
            main(["import-taxonomy", "--file", str(path), "--storage", str(storage), "--replace"])
            == 0
        )

    def test_store_id_without_storage_is_config_error(self, capsys):
        assert main(["export", "--taxonomy", "someid"]) == 2
        assert "[config]" in capsys.readouterr().err

    def test_missing_store_id(self, tmp_path, capsys):
        storage = tmp_path / "store"
        storage.mkdir()
        assert main(["export", "--taxonomy", "ghost", "--storage", str(storage)]) == 2
        assert "[not_found]" in capsys.readouterr().err

    def test_env_var_supplies_storage(self, tmp_path, monkeypatch, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        storage = tmp_path / "store"
        monkeypatch.setenv("TAXLAB_STORAGE_PATH", str(storage))
        assert main(["import-taxonomy", "--file", str(path)]) == 0
        assert main(["export", "--taxonomy", tax.id]) == 0

    def test_corrupt_json_exits_2_with_position(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "format": oops\n}', encoding="utf-8")
        assert main(["export", "--taxonomy", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "[json]" in err and "line 2" in err

    def test_unreadable_file_exits_3(self, tmp_path, capsys):
        missing = tmp_path / "missing.json"
        assert main(["export", "--taxonomy", str(missing)]) == 3
        assert "[io]" in capsys.readouterr().err


class TestImportCommand:
    def test_dry_run_then_apply(self, tmp_path, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        corpus_dir = write_demo_corpus(tmp_path)
        assert (
            main(
                [
                    "import",
                    "--taxonomy",
                    str(path),
                    "--corpus",
                    str(corpus_dir),
                    "--method",
                    "regex",
                    "--dry-run",
                    "--verbose",
                ]
            )
            == 0
        )
        out = capsys.readouterr().out
        assert "p1 -> obfuscation (3)" in out
        assert "dry run" in out
        # dry run did not touch the file
        assert json.loads(path.read_text())["mappings"] == []
        assert (
            main(
                [
                    "import",
                    "--taxonomy",
                    str(path),
                    "--corpus",
                    str(corpus_dir),
                    "--method",
                    "regex",
                ]
            )
            == 0
        )
        out = capsys.readouterr().out
        assert "1 mappings applied" in out
        doc = json.loads(path.read_text())
        assert len(doc["mappings"]) == 1
        assert doc["mappings"][0]["provenance"] == "auto:regex"
        # one bump for the paper snapshot, one for the applied batch
        assert doc["taxonomy"]["version"] == tax.version + 2

    def test_missing_corpus_dir_exits_3(self, tmp_path, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        assert (
            main(["import", "--taxonomy", str(path), "--corpus", str(tmp_path / "nope")]) == 3
        )


class TestBench:
    def test_tiny_sweep_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert (
            main(
                [
                    "bench",
                    "matrix",
                    "--sizes",
                    "10:30:10",
                    "--reps",
                    "2",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        lines = out.read_text().splitlines()
        assert lines[0] == "n,mean_ms,min_ms,max_ms"
        assert len(lines) == 4
        printed = capsys.readouterr().out
        assert "log-log slope:" in printed
        assert "spearman rho vs size:" in printed


class TestConformity:
    def test_synthetic_grid(self, tmp_path, capsys):
        out = tmp_path / "conf.csv"
        assert (
            main(
                [
                    "experiment",
                    "conformity",
                    "--synthetic",
                    "--moc",
                    "3",
                    "--methods",
                    "regex,levenshtein",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        lines = out.read_text().splitlines()
        assert lines[0] == "method,moc,auto_pairs,manual_pairs,intersection,conformity_pct"
        assert len(lines) == 3  # 2 methods x 1 gate
        printed = capsys.readouterr().out
        assert "best levenshtein@3 = 100.00%" in printed

    def test_file_corpus_flow(self, tmp_path, capsys):
        tax, path = write_taxonomy_file(tmp_path)
        corpus_dir = write_demo_corpus(tmp_path)
        concept_id = next(iter(tax.concepts))
        baseline = tmp_path / "baseline.csv"
        baseline.write_text(f"paper_id,concept_id\np1,{concept_id}\n", encoding="utf-8")
        assert (
            main(
                [
                    "experiment",
                    "conformity",
                    "--corpus",
                    str(corpus_dir),
                    "--baseline",
                    str(baseline),
                    "--taxonomy",
                    str(path),
                    "--moc",
                    "3,4",
                    "--methods",
                    "regex",
                ]
            )
            == 0
        )
        out = capsys.readouterr().out
        rows = out.splitlines()
        assert rows[1] == "regex,3,1,1,1,100.00"
        assert rows[2] == "regex,4,0,1,0,0.00"

    def test_missing_inputs_rejected(self, capsys):
        assert main(["experiment", "conformity"]) == 2
        assert "[validation]" in capsys.readouterr().err


class TestServe:
    def test_busy_port_exits_3(self, tmp_path, capsys):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        try:
            blocker.bind(("127.0.0.1", 0))
            blocker.listen(1)
            port = blocker.getsockname()[1]
            code = main(
                [
                    "serve",
                    "--listen",
                    f"127.0.0.1:{port}",
                    "--storage",
                    str(tmp_path / "store"),
                ]
            )
        finally:
            blocker.close()
        assert code == 3
        assert "[io]" in capsys.readouterr().err

    def test_bad_listen_spec_exits_2(self, tmp_path, capsys):
        assert (
            main(
                [
                    "serve",
                    "--listen",
                    "127.0.0.1:70000",
                    "--storage",
                    str(tmp_path / "store"),
                ]
            )
            == 2
        )
        assert "[config]" in capsys.readouterr().err

    def test_config_file_unknown_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"storage_path": str(tmp_path), "listenn": "x"}))
        assert main(["serve", "--config", str(cfg)]) == 2
        assert "[config]" in capsys.readouterr().err

    def test_config_file_missing_exits_3(self, tmp_path):
        assert main(["serve", "--config", str(tmp_path / "nope.json")]) == 3

    def test_serve_requires_storage(self, capsys):
        assert main(["serve", "--listen", "127.0.0.1:1"]) == 2
        assert "[config]" in capsys.readouterr().err
