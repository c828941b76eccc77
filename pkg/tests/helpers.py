"""Shared test utilities: independent oracles and random generators.

The oracles restate definitions directly (full DP matrices, explicit
enumeration, pairwise set intersections) so the optimized library code
is checked against something that cannot share its bugs.
"""

from __future__ import annotations

import random
from collections import Counter
from itertools import combinations

from taxlab import Paper, Taxonomy
from taxlab.biblio import Tag, Vote
from taxlab.errors import TaxlabError

HIER = ("inheritance", "composition", "aggregation")


# -- similarity oracles -------------------------------------------------------


def levenshtein_oracle(a: str, b: str) -> int:
    rows = len(a) + 1
    cols = len(b) + 1
    d = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        d[i][0] = i
    for j in range(cols):
        d[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[rows - 1][cols - 1]


def dice_oracle(a: str, b: str) -> float:
    if len(a) < 2 or len(b) < 2:
        return 1.0 if a == b else 0.0
    xs = Counter(a[i : i + 2] for i in range(len(a) - 1))
    ys = Counter(b[i : i + 2] for i in range(len(b) - 1))
    shared = sum((xs & ys).values())
    return 2.0 * shared / (len(a) - 1 + len(b) - 1)


def fuzzy_oracle(query: str, target: str) -> float | None:
    """Best (least penalized) embedding of query into target, by brute force.

    An embedding is a strictly increasing choice of target indices whose
    characters spell the query.  Its penalty counts every target
    character after the match starts that is not consumed by the query,
    plus 3 per break between consecutive runs.  Score is the negated
    minimal penalty; None when no embedding exists.
    """
    if not query or len(query) > len(target):
        return None
    best: float | None = None
    for positions in combinations(range(len(target)), len(query)):
        if any(target[p] != query[i] for i, p in enumerate(positions)):
            continue
        runs = 1 + sum(1 for i in range(1, len(positions)) if positions[i] != positions[i - 1] + 1)
        skipped = (len(target) - positions[0]) - len(query)
        score = -(skipped + 3 * (runs - 1))
        if best is None or score > best:
            best = score
    return best


# -- analysis oracle ----------------------------------------------------------


def tree_parent_oracle(tax: Taxonomy) -> dict[str, str]:
    """First hierarchical parent per concept, by relation insertion order."""
    parent: dict[str, str] = {}
    for rel in tax.relations.values():
        if rel.rel_type in HIER and rel.source_id not in parent:
            parent[rel.source_id] = rel.target_id
    return parent


def effective_papers_oracle(tax: Taxonomy) -> dict[str, set[str]]:
    parent = tree_parent_oracle(tax)
    children: dict[str, list[str]] = {}
    for child, par in parent.items():
        children.setdefault(par, []).append(child)
    direct: dict[str, set[str]] = {cid: set() for cid in tax.concepts}
    for (pid, cid) in tax.mappings:
        direct[cid].add(pid)
    out: dict[str, set[str]] = {}

    def visit(cid: str) -> set[str]:
        if cid in out:
            return out[cid]
        papers = set(direct[cid])
        for ch in children.get(cid, ()):
            papers |= visit(ch)
        out[cid] = papers
        return papers

    for cid in tax.concepts:
        visit(cid)
    return out


def matrix_cells_oracle(
    tax: Taxonomy, axis: list[str], allowed: set[str] | None, min_cell: int
) -> list[list[int]]:
    sets = effective_papers_oracle(tax)
    if allowed is not None:
        sets = {cid: papers & allowed for cid, papers in sets.items()}
    cells = [[len(sets[x] & sets[y]) for y in axis] for x in axis]
    if min_cell > 0:
        cells = [[v if v >= min_cell else 0 for v in row] for row in cells]
    return cells


# -- random structures ----------------------------------------------------------


def random_taxonomy(
    rng: random.Random,
    max_concepts: int = 30,
    max_dims: int = 3,
    max_papers: int = 25,
    with_reviews: bool = False,
) -> Taxonomy:
    tax = Taxonomy.create(f"random {rng.randrange(10**9)}")
    dims = list(tax.dimensions.values())
    for i in range(rng.randint(0, max_dims - 1)):
        dims.append(tax.add_dimension(f"dimension {i}"))
    n = rng.randint(1, max_concepts)
    concepts = [
        tax.add_concept(rng.choice(dims).id, f"concept {i:03d}") for i in range(n)
    ]
    for i in range(1, n):
        if rng.random() < 0.7:
            parent = concepts[rng.randrange(i)]
            tax.add_relation(concepts[i].id, parent.id, rng.choice(HIER))
    for _ in range(rng.randint(0, n // 3)):
        a, b = rng.sample(concepts, 2) if n >= 2 else (concepts[0], concepts[0])
        try:
            tax.add_relation(
                a.id, b.id, rng.choice(("association", "unspecified") + HIER)
            )
        except TaxlabError:
            pass
    for i in rng.sample(range(n), min(n, rng.randint(0, 3))):
        tax.add_synonym(concepts[i].id, f"alias {i}")
    for p in range(rng.randint(0, max_papers)):
        paper = Paper(
            id=f"p{p:03d}",
            title=f"paper {p:03d}",
            year=rng.choice([None, 1995 + p % 30]),
            citation_count=rng.randrange(200),
        )
        if with_reviews:
            if rng.random() < 0.5:
                paper.tags.append(Tag(rng.choice(["survey", "tool", "empirical"])))
            for rev in range(rng.randint(0, 3)):
                paper.votes.append(
                    Vote(f"reviewer-{rev}", rng.choice(["include", "exclude"]))
                )
        tax.register_paper(paper)
        for c in rng.sample(concepts, rng.randint(0, min(4, n))):
            tax.map_paper(paper.id, c.id)
    return tax
