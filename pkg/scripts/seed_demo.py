#!/usr/bin/env python3
"""Seed a storage directory with a small demo workspace.

Creates one user (demo / demo-password), a public software-protection
taxonomy with two dimensions, a handful of mapped papers, and a review board
with votes and tags.  Point the API server at the directory afterwards:

    python scripts/seed_demo.py --storage ./demo-data
    taxlab serve --storage ./demo-data --port 8765
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from taxlab import AuthService, DocumentStore, Paper, Platform


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--storage", type=pathlib.Path, required=True)
    args = parser.parse_args()

    store = DocumentStore(args.storage)
    platform = Platform(store)
    auth = AuthService(store)
    auth.register("demo", "demo-password")

    tax = platform.create_taxonomy("Software Protection")
    dim_protection = next(iter(tax.dimensions))

    def build(t):
        metric = t.add_dimension("Metric")
        protection = t.add_concept(dim_protection, "Protection", kind="major")
        obfuscation = t.add_concept(dim_protection, "Obfuscation")
        guards = t.add_concept(dim_protection, "Guards")
        potency = t.add_concept(metric.id, "Potency")
        t.add_relation(obfuscation.id, protection.id, "inheritance")
        t.add_relation(guards.id, protection.id, "inheritance")
        t.add_synonym(obfuscation.id, "code obfuscation")
        t.add_synonym(guards.id, "integrity guards")
        papers = [
            Paper(id="p1", title="Obfuscation transforms", year=1998, citation_count=410),
            Paper(id="p2", title="Guarding binaries", year=2005, citation_count=88),
            Paper(id="p3", title="Measuring potency", year=2013, citation_count=35),
        ]
        for paper in papers:
            t.register_paper(paper)
        t.map_paper("p1", obfuscation.id)
        t.map_paper("p2", guards.id)
        t.map_paper("p3", potency.id)
        t.map_paper("p3", obfuscation.id)
        t.set_public(True)

    platform.mutate(tax.id, build)

    board = platform.board
    board.import_records(
        [
            {"id": "p1", "title": "Obfuscation transforms", "year": 1998},
            {"id": "p2", "title": "Guarding binaries", "year": 2005},
            {"id": "p3", "title": "Measuring potency", "year": 2013},
            {"id": "p4", "title": "Unrelated survey", "year": 2020},
        ]
    )
    board.cast_vote("demo", "p1", "include")
    board.cast_vote("demo", "p2", "include")
    board.cast_vote("demo", "p4", "exclude")
    board.tag_paper("p1", "obfuscation")
    board.tag_paper("p2", "guards")
    board.tag_paper("p3", "metrics")

    print(f"seeded {args.storage}")
    print(f"taxonomy id: {tax.id}")
    print("user: demo / demo-password")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
