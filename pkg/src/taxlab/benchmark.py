"""Scaling benchmark for the correlation matrix builder.

Generates flat synthetic taxonomies where roughly half of all concept
pairs share one paper, times matrix construction across a size sweep,
and summarizes growth with a log-log slope and a Spearman rank
correlation against size.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np
from scipy import stats

from .analysis import Filter, build_matrix
from .biblio import Paper
from .model import Mapping, Taxonomy

DEFAULT_SIZES: tuple[int, ...] = tuple(range(10, 201, 10))
DEFAULT_REPS = 10
DEFAULT_SEED = 7


@dataclass
class BenchRow:
    n: int
    mean_ms: float
    min_ms: float
    max_ms: float

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "mean_ms": self.mean_ms, "min_ms": self.min_ms, "max_ms": self.max_ms}


def generate_benchmark_taxonomy(n: int, seed: int) -> Taxonomy:
    """Flat taxonomy with n concepts; ~half of all concept pairs share one paper.

    Papers and mappings are bulk-inserted: generation is setup, only the
    matrix build is timed, and the per-call version bookkeeping of the
    mutation API would dominate at the larger sizes.
    """
    rng = random.Random(seed)
    tax = Taxonomy.create(name=f"bench-{n}", taxonomy_id=f"bench-{n}-{seed}")
    dim_id = next(iter(tax.dimensions))
    concept_ids = [tax.add_concept(dim_id, f"concept {i:03d}").id for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for idx, (i, j) in enumerate(rng.sample(pairs, len(pairs) // 2)):
        pid = f"paper-{idx:06d}"
        tax.papers[pid] = Paper(id=pid, title=f"synthetic paper {idx}")
        for cid in (concept_ids[i], concept_ids[j]):
            tax.mappings[(pid, cid)] = Mapping(pid, cid, "manual")
    tax.version += 1
    return tax


def rep_seed(base_seed: int, n: int, rep: int) -> int:
    return base_seed * 1_000_003 + n * 1000 + rep


def run_matrix_benchmark(
    sizes: Sequence[int] = DEFAULT_SIZES,
    reps: int = DEFAULT_REPS,
    seed: int = DEFAULT_SEED,
) -> list[BenchRow]:
    rows: list[BenchRow] = []
    flt = Filter()
    for n in sizes:
        samples_ms: list[float] = []
        for rep in range(reps):
            tax = generate_benchmark_taxonomy(n, rep_seed(seed, n, rep))
            started = time.perf_counter()
            build_matrix(tax, flt)
            samples_ms.append((time.perf_counter() - started) * 1000.0)
        rows.append(BenchRow(n, statistics.fmean(samples_ms), min(samples_ms), max(samples_ms)))
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "mean_ms", "min_ms", "max_ms"])
    for row in rows:
        writer.writerow([row.n, f"{row.mean_ms:.4f}", f"{row.min_ms:.4f}", f"{row.max_ms:.4f}"])
    return out.getvalue()


def loglog_slope(rows: Sequence[BenchRow]) -> float:
    """Least-squares slope of log(mean time) against log(size)."""
    xs = np.log([row.n for row in rows])
    ys = np.log([row.mean_ms for row in rows])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def spearman_vs_size(rows: Sequence[BenchRow]) -> float:
    result = stats.spearmanr([row.n for row in rows], [row.mean_ms for row in rows])
    return float(getattr(result, "statistic", getattr(result, "correlation", float("nan"))))
