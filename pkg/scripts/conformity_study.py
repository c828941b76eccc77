#!/usr/bin/env python3
"""Compare automatic paper-to-concept matching against a manual baseline.

Runs every matching method (exact phrase, bigram overlap, edit distance,
subsequence scoring) across a grid of minimum-occurrence gates and reports
conformity: the percentage of manually assigned paper/concept pairs that the
automatic pass reproduces.

By default the study runs on a generated corpus whose papers contain planted
concept phrases with single-character typos, so edit-distance and bigram
methods should recover pairs that exact phrase search misses.  Point it at a
corpus directory, taxonomy file, and baseline CSV to study real data instead.

Usage:
    python scripts/conformity_study.py --out grid.csv
    python scripts/conformity_study.py --corpus papers/ --taxonomy tax.json \
        --baseline manual.csv --moc 10,5,3,1
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from taxlab.corpus import load_baseline, load_corpus
from taxlab.canonical import taxonomy_from_document
from taxlab.importer import METHODS, report_to_csv, run_conformity_experiment
from taxlab.synthcorpus import build_synthetic_corpus

import json


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", type=pathlib.Path, help="directory of paper text files")
    parser.add_argument("--taxonomy", type=pathlib.Path, help="taxonomy document (JSON)")
    parser.add_argument("--baseline", type=pathlib.Path, help="manual paper,concept CSV")
    parser.add_argument("--seed", type=int, default=11, help="seed for the generated corpus")
    parser.add_argument("--papers", type=int, default=30, help="generated corpus size")
    parser.add_argument(
        "--typo-rate", type=float, default=0.3, help="fraction of planted phrases perturbed"
    )
    parser.add_argument("--moc", default="10,5,3,1", help="minimum-occurrence gates")
    parser.add_argument(
        "--methods", default=",".join(METHODS), help="comma-separated matching methods"
    )
    parser.add_argument("--out", type=pathlib.Path, default=None, help="write CSV here")
    args = parser.parse_args()

    real_inputs = (args.corpus, args.taxonomy, args.baseline)
    if any(real_inputs) and not all(real_inputs):
        parser.error("--corpus, --taxonomy, and --baseline must be given together")

    if args.corpus:
        papers = load_corpus(args.corpus)
        taxonomy = taxonomy_from_document(json.loads(args.taxonomy.read_text(encoding="utf-8")))
        baseline = load_baseline(args.baseline)
    else:
        built = build_synthetic_corpus(
            seed=args.seed, n_papers=args.papers, typo_rate=args.typo_rate
        )
        papers, taxonomy, baseline = built.papers, built.taxonomy, built.baseline
        print(
            f"generated corpus: {len(papers)} papers, "
            f"{len(taxonomy.concepts)} concepts, {len(baseline)} baseline pairs"
        )

    moc_values = [int(v) for v in args.moc.split(",") if v]
    methods = [m for m in args.methods.split(",") if m]
    cells = run_conformity_experiment(
        papers, taxonomy, baseline, moc_values=moc_values, methods=methods
    )

    csv_text = report_to_csv(cells)
    if args.out:
        args.out.write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.out} ({len(cells)} cells)")
    else:
        print(csv_text, end="")

    best = max(cells, key=lambda c: (c.conformity_pct, c.intersection))
    print(f"best {best.method}@{best.min_occurrences} = {best.conformity_pct:.2f}%")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
