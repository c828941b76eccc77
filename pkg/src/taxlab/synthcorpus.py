"""Seeded synthetic corpus for conformity experiments.

Twenty concepts, each named by three long distinct vocabulary words, are
planted into paper bodies 3-5 times per (paper, concept) pair; a fixed
fraction of the planted phrase instances get a single interior-letter
typo.  Phrase joins are at least 24 characters, so a one-letter typo
keeps bigram similarity above 0.9 and edit distance at 1: fuzzy matchers
still count those instances while exact phrase matching loses them.
Everything is driven by one seed, so the corpus is reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .biblio import Paper
from .model import Taxonomy

_VOCAB = (
    "adaptive", "gradient", "manifold", "spectral", "quantized", "recursive",
    "symbolic", "temporal", "semantic", "stochastic", "invariant", "embedding",
    "attention", "consensus", "replication", "sharding", "telemetry", "profiling",
    "sandboxing", "obfuscation", "watermarking", "checksums", "virtualized",
    "decompiler", "interpreter", "bytecodes", "allocator", "scheduler",
    "pipelined", "speculative", "coherence", "directory", "signature",
    "entropies", "canonical", "homomorphic", "lattices", "federated",
    "differential", "anonymity", "inference", "retrieval", "indexing",
    "clustering", "regression", "convolution", "recurrent", "transformer",
    "distillation", "sparsity", "quantiles", "bootstrap", "bayesian",
    "frequentist", "likelihood", "posterior", "marginals", "variational",
    "evidence", "calibration",
)

# Short connective words; all well under 8 letters, so no filler window can
# come close to a concept phrase under any matcher.
_FILLER = (
    "the", "of", "and", "for", "with", "into", "under", "over", "results",
    "study", "method", "we", "show", "that", "using", "new", "our", "this",
    "from", "each", "more", "case", "tests", "on", "a", "is", "are", "than",
)

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass
class SyntheticCorpus:
    taxonomy: Taxonomy
    papers: list[Paper]
    baseline: set[tuple[str, str]]  # planted (paper_id, concept_id) pairs


def _typo(word: str, rng: random.Random) -> str:
    pos = rng.randrange(1, len(word) - 1)
    old = word[pos]
    new = rng.choice([c for c in _ALPHABET if c != old])
    return word[:pos] + new + word[pos + 1 :]


def build_synthetic_corpus(
    seed: int = 11,
    n_papers: int = 30,
    typo_rate: float = 0.30,
) -> SyntheticCorpus:
    rng = random.Random(seed)
    taxonomy = Taxonomy.create(name="synthetic conformity corpus", taxonomy_id=f"synth-{seed}")
    dim_id = next(iter(taxonomy.dimensions))
    n_concepts = len(_VOCAB) // 3
    concept_ids: list[str] = []
    phrases: list[list[str]] = []
    for i in range(n_concepts):
        words = list(_VOCAB[3 * i : 3 * i + 3])
        phrases.append(words)
        concept_ids.append(taxonomy.add_concept(dim_id, " ".join(words)).id)

    # Plan all plantings first so the typo quota is exact over the corpus.
    plantings: list[tuple[int, int]] = []  # (paper index, concept index)
    baseline: set[tuple[str, str]] = set()
    paper_instances: list[list[int]] = [[] for _ in range(n_papers)]
    for p in range(n_papers):
        for ci in rng.sample(range(n_concepts), rng.randint(2, 4)):
            baseline.add((f"synth-{p:03d}", concept_ids[ci]))
            for _ in range(rng.randint(3, 5)):
                plantings.append((p, ci))
                paper_instances[p].append(len(plantings) - 1)
    typo_indices = set(rng.sample(range(len(plantings)), round(typo_rate * len(plantings))))

    papers: list[Paper] = []
    for p in range(n_papers):
        tokens: list[str] = []
        order = list(paper_instances[p])
        rng.shuffle(order)
        for inst in order:
            tokens.extend(rng.choices(_FILLER, k=rng.randint(2, 6)))
            words = list(phrases[plantings[inst][1]])
            if inst in typo_indices:
                w = rng.randrange(3)
                words[w] = _typo(words[w], rng)
            tokens.extend(words)
        tokens.extend(rng.choices(_FILLER, k=rng.randint(2, 6)))
        papers.append(
            Paper(
                id=f"synth-{p:03d}",
                title=f"Synthetic study {p:03d}",
                abstract="Generated corpus entry.",
                year=2000 + p % 25,
                body_text=" ".join(tokens) + ".",
            )
        )
    return SyntheticCorpus(taxonomy, papers, baseline)
