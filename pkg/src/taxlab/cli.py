"""Command line interface.

Exit codes: 0 success, 1 usage, 2 domain errors (including malformed
JSON, reported with line and column), 3 I/O errors (unreadable files,
ports already bound).  Failures print one grepable line to stderr:
``taxlab: error: [code] message``.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import benchmark
from .biblio import Paper
from .canonical import canonical_dumps, taxonomy_from_document, taxonomy_to_document
from .config import ENV_STORAGE_PATH, load_config, parse_listen
from .corpus import load_baseline, load_corpus
from .errors import ConfigError, NotFoundError, StorageError, TaxlabError, ValidationError
from .importer import (
    DEFAULT_MIN_OCCURRENCES,
    METHODS,
    MatchConfig,
    report_to_csv,
    run_conformity_experiment,
    suggest_mappings,
)
from .model import Taxonomy
from .store import DocumentStore
from .synthcorpus import build_synthetic_corpus

PROG = "taxlab"


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems with exit code 1, not 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{PROG}: error: [usage] {message}", file=sys.stderr)
        raise SystemExit(1)


def _fail_line(code: str, message: str) -> None:
    print(f"{PROG}: error: [{code}] {message}", file=sys.stderr)


# -- taxonomy references: file path or store id --------------------------------


def _storage_dir(args: argparse.Namespace) -> str | None:
    import os

    return getattr(args, "storage", None) or os.environ.get(ENV_STORAGE_PATH)


def _resolve_taxonomy(
    ref: str, args: argparse.Namespace
) -> tuple[Taxonomy, Callable[[Taxonomy], None]]:
    """A taxonomy plus a saver, from either a document file or a store id."""
    path = Path(ref)
    if path.is_file() or ref.endswith(".json"):
        document = json.loads(path.read_text(encoding="utf-8"))
        tax = taxonomy_from_document(document)

        def save_file(t: Taxonomy) -> None:
            path.write_text(canonical_dumps(taxonomy_to_document(t)), encoding="utf-8")

        return tax, save_file
    storage = _storage_dir(args)
    if storage is None:
        raise ConfigError(
            f"'{ref}' is not a file; reading it as a store id needs --storage "
            f"or {ENV_STORAGE_PATH}"
        )
    store = DocumentStore(storage)
    document = store.get("taxonomy", ref)
    if document is None:
        raise NotFoundError("taxonomy not found in store", taxonomy_id=ref, storage=storage)
    tax = taxonomy_from_document(document)
    return tax, lambda t: store.put("taxonomy", t.id, taxonomy_to_document(t))


# -- subcommand handlers --------------------------------------------------------


def _cmd_serve(args: argparse.Namespace) -> int:
    env = None
    if args.listen or args.storage or args.token_ttl_hours:
        import os

        env = dict(os.environ)
        if args.listen:
            env["TAXLAB_LISTEN"] = args.listen
        if args.storage:
            env[ENV_STORAGE_PATH] = args.storage
        if args.token_ttl_hours:
            env["TAXLAB_TOKEN_TTL_HOURS"] = str(args.token_ttl_hours)
    cfg = load_config(args.config, env)
    host, port = parse_listen(cfg.listen)

    # Claim the port first so a bind failure is a clean I/O error instead
    # of a server stack trace.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    finally:
        probe.close()

    import uvicorn

    from .auth import AuthService
    from .platform import Platform
    from .webapi import create_app

    store = DocumentStore(cfg.storage_path)
    app = create_app(Platform(store), AuthService(store, token_ttl_hours=cfg.token_ttl_hours))
    print(f"{PROG}: serving on http://{host}:{port}/api/v1 (storage: {cfg.storage_path})")
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def _match_config(args: argparse.Namespace) -> MatchConfig:
    return MatchConfig(
        method=args.method,
        threshold=args.threshold,
        min_occurrences=args.moc,
        use_synonyms=not args.no_synonyms,
    )


def run_import(
    tax: Taxonomy, papers: Sequence[Paper], config: MatchConfig, dry_run: bool
) -> dict[str, Any]:
    suggested = 0
    applied = 0
    details = []
    for paper in papers:
        suggestions = suggest_mappings(paper, tax, config)
        suggested += len(suggestions)
        details.append((paper, suggestions))
        if not dry_run and suggestions:
            tax.register_paper(paper)
            applied += tax.apply_suggestions(suggestions)
    return {"suggested": suggested, "applied": applied, "details": details}


def _cmd_import(args: argparse.Namespace) -> int:
    config = _match_config(args)
    papers = load_corpus(args.corpus)
    tax, save = _resolve_taxonomy(args.taxonomy, args)
    result = run_import(tax, papers, config, args.dry_run)
    if args.verbose:
        for paper, suggestions in result["details"]:
            for s in suggestions:
                name = tax.concepts[s.concept_id].name
                print(f"  {paper.id} -> {name} ({s.occurrence_count})")
    if not args.dry_run:
        save(tax)
    mode = "dry run, nothing applied" if args.dry_run else f"taxonomy now at version {tax.version}"
    print(
        f"import: {len(papers)} papers, {result['suggested']} suggestions, "
        f"{result['applied']} mappings applied ({mode})"
    )
    return 0


def _parse_sizes(text: str) -> list[int]:
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise ValidationError("sizes must look like start:stop:step", sizes=text) from None
    if len(parts) != 3 or parts[0] < 1 or parts[1] < parts[0] or parts[2] < 1:
        raise ValidationError("sizes must look like start:stop:step", sizes=text)
    return list(range(parts[0], parts[1] + 1, parts[2]))


def _cmd_bench_matrix(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.sizes)
    rows = benchmark.run_matrix_benchmark(sizes=sizes, reps=args.reps, seed=args.seed)
    csv_text = benchmark.rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        print(csv_text, end="")
    slope = benchmark.loglog_slope(rows)
    rho = benchmark.spearman_vs_size(rows)
    print(f"bench matrix: sizes {sizes[0]}..{sizes[-1]}, reps {args.reps}")
    print(f"log-log slope: {slope:.3f}")
    print(f"spearman rho vs size: {rho:.3f}")
    return 0


def _parse_moc_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(p) for p in text.split(",") if p)
    except ValueError:
        raise ValidationError("--moc must be a comma-separated list of integers", moc=text) from None
    if not values or any(v < 1 for v in values):
        raise ValidationError("--moc values must be >= 1", moc=text)
    return values


def _parse_methods(text: str) -> tuple[str, ...]:
    values = tuple(p for p in text.split(",") if p)
    unknown = [v for v in values if v not in METHODS]
    if unknown or not values:
        raise ValidationError(
            f"methods must be among {', '.join(METHODS)}", methods=text
        )
    return values


def _cmd_experiment_conformity(args: argparse.Namespace) -> int:
    moc_values = _parse_moc_list(args.moc)
    methods = _parse_methods(args.methods)
    if args.synthetic:
        corpus = build_synthetic_corpus(seed=args.seed)
        papers, tax, baseline = corpus.papers, corpus.taxonomy, corpus.baseline
    else:
        if not (args.corpus and args.baseline and args.taxonomy):
            raise ValidationError(
                "conformity needs --corpus, --baseline and --taxonomy (or --synthetic)"
            )
        papers = load_corpus(args.corpus)
        tax, _ = _resolve_taxonomy(args.taxonomy, args)
        baseline = load_baseline(args.baseline)
    cells = run_conformity_experiment(
        papers, tax, baseline, moc_values=moc_values, methods=methods,
        use_synonyms=not args.no_synonyms,
    )
    csv_text = report_to_csv(cells)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        print(csv_text, end="")
    best = max(cells, key=lambda c: c.conformity_pct)
    print(
        f"conformity: {len(methods)} methods x {len(moc_values)} occurrence gates, "
        f"best {best.method}@{best.min_occurrences} = {best.conformity_pct:.2f}%"
    )
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    tax, _ = _resolve_taxonomy(args.taxonomy, args)
    text = canonical_dumps(taxonomy_to_document(tax))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"export: wrote {args.out} (version {tax.version})")
    else:
        print(text, end="")
    return 0


def _cmd_import_taxonomy(args: argparse.Namespace) -> int:
    document = json.loads(Path(args.file).read_text(encoding="utf-8"))
    tax = taxonomy_from_document(document)
    storage = _storage_dir(args)
    if storage is None:
        raise ConfigError(f"import-taxonomy needs --storage or {ENV_STORAGE_PATH}")
    store = DocumentStore(storage)
    if store.exists("taxonomy", tax.id) and not args.replace:
        raise ValidationError(
            "taxonomy already exists in store; pass --replace to overwrite",
            taxonomy_id=tax.id,
        )
    store.put("taxonomy", tax.id, taxonomy_to_document(tax))
    print(f"import-taxonomy: stored '{tax.name}' as {tax.id} (version {tax.version})")
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Taxonomy platform tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    serve = sub.add_parser("serve", help="run the HTTP API server")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--listen", help="host:port (overrides config)")
    serve.add_argument("--storage", help="storage directory (overrides config)")
    serve.add_argument("--token-ttl-hours", type=float, default=None)
    serve.set_defaults(func=_cmd_serve)

    imp = sub.add_parser("import", help="suggest and apply paper mappings from a corpus")
    imp.add_argument("--taxonomy", required=True, help="document file or store id")
    imp.add_argument("--corpus", required=True, help="corpus directory")
    imp.add_argument("--storage", help="store root when --taxonomy is an id")
    imp.add_argument("--method", default="levenshtein", choices=METHODS)
    imp.add_argument("--threshold", type=float, default=None)
    imp.add_argument("--moc", type=int, default=DEFAULT_MIN_OCCURRENCES,
                     help="minimal occurrence count")
    imp.add_argument("--no-synonyms", action="store_true")
    imp.add_argument("--dry-run", action="store_true")
    imp.add_argument("--verbose", action="store_true")
    imp.set_defaults(func=_cmd_import)

    bench = sub.add_parser("bench", help="performance benchmarks")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    bm = bench_sub.add_parser("matrix", help="matrix build scaling sweep")
    bm.add_argument("--sizes", default="10:200:10", help="start:stop:step")
    bm.add_argument("--reps", type=int, default=benchmark.DEFAULT_REPS)
    bm.add_argument("--seed", type=int, default=benchmark.DEFAULT_SEED)
    bm.add_argument("--out", help="CSV output path (default: stdout)")
    bm.set_defaults(func=_cmd_bench_matrix)

    exp = sub.add_parser("experiment", help="evaluation experiments")
    exp_sub = exp.add_subparsers(dest="experiment_command", required=True, parser_class=_Parser)
    conf = exp_sub.add_parser("conformity", help="automatic vs manual mapping conformity grid")
    conf.add_argument("--corpus", help="corpus directory")
    conf.add_argument("--baseline", help="manual baseline CSV")
    conf.add_argument("--taxonomy", help="document file or store id")
    conf.add_argument("--storage", help="store root when --taxonomy is an id")
    conf.add_argument("--synthetic", action="store_true",
                      help="use the built-in seeded corpus instead of files")
    conf.add_argument("--seed", type=int, default=11)
    conf.add_argument("--moc", default="10,5,3,1", help="comma-separated occurrence gates")
    conf.add_argument("--methods", default=",".join(METHODS))
    conf.add_argument("--no-synonyms", action="store_true")
    conf.add_argument("--out", help="CSV output path (default: stdout)")
    conf.set_defaults(func=_cmd_experiment_conformity)

    exp_cmd = sub.add_parser("export", help="write a taxonomy as a canonical JSON document")
    exp_cmd.add_argument("--taxonomy", required=True, help="document file or store id")
    exp_cmd.add_argument("--storage", help="store root when --taxonomy is an id")
    exp_cmd.add_argument("--out", help="output file (default: stdout)")
    exp_cmd.set_defaults(func=_cmd_export)

    imp_tax = sub.add_parser("import-taxonomy", help="load a document file into the store")
    imp_tax.add_argument("--file", required=True)
    imp_tax.add_argument("--storage", help="store root")
    imp_tax.add_argument("--replace", action="store_true")
    imp_tax.set_defaults(func=_cmd_import_taxonomy)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except StorageError as exc:
        _fail_line(exc.code, exc.message)
        return 3
    except TaxlabError as exc:
        _fail_line(exc.code, exc.message)
        return 2
    except json.JSONDecodeError as exc:
        _fail_line("json", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
        return 2
    except OSError as exc:
        _fail_line("io", str(exc))
        return 3
    except KeyboardInterrupt:
        return 130


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
