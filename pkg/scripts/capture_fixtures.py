#!/usr/bin/env python3
"""Capture real API responses as JSON fixtures for the frontend test suite.

Builds a two-dimension taxonomy with a three-level hierarchy and six mapped
papers, then records the responses the browser studio consumes. The frontend
tests replay these files instead of talking to a live server, so heatmap
aggregation and geometry rendering are checked against genuine server output.

Usage:
    python scripts/capture_fixtures.py [--out frontend/tests/fixtures]
"""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from taxlab import DocumentStore, Paper, Platform
from taxlab.analysis import Filter


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out",
        type=pathlib.Path,
        default=pathlib.Path(__file__).resolve().parent.parent / "frontend/tests/fixtures",
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    platform = Platform(DocumentStore(None))
    tax = platform.create_taxonomy("Software Protection")
    dim_protection = next(iter(tax.dimensions))

    def build(t):
        metric_dim = t.add_dimension("Metric")
        protection = t.add_concept(dim_protection, "Protection", kind="major")
        obfuscation = t.add_concept(dim_protection, "Obfuscation")
        control_flow = t.add_concept(dim_protection, "Control Flow")
        data_flow = t.add_concept(dim_protection, "Data Flow")
        guards = t.add_concept(dim_protection, "Guards")
        metric = t.add_concept(metric_dim.id, "Metric", kind="major")
        potency = t.add_concept(metric_dim.id, "Potency")
        resilience = t.add_concept(metric_dim.id, "Resilience")
        t.add_relation(obfuscation.id, protection.id, "inheritance")
        t.add_relation(guards.id, protection.id, "inheritance")
        t.add_relation(control_flow.id, obfuscation.id, "inheritance")
        t.add_relation(data_flow.id, obfuscation.id, "inheritance")
        t.add_relation(potency.id, metric.id, "inheritance")
        t.add_relation(resilience.id, metric.id, "inheritance")
        t.add_synonym(control_flow.id, "control-flow flattening")
        papers = [
            Paper(id="p1", title="Flattening loops", year=1998, citation_count=410),
            Paper(id="p2", title="Opaque data", year=2003, citation_count=120),
            Paper(id="p3", title="Guard networks", year=2005, citation_count=88),
            Paper(id="p4", title="Potent transforms", year=2009, citation_count=64),
            Paper(id="p5", title="Resilient guards", year=2013, citation_count=35),
            Paper(id="p6", title="A broad survey", year=2020, citation_count=12),
        ]
        for paper in papers:
            t.register_paper(paper)
        t.map_paper("p1", control_flow.id)
        t.map_paper("p1", potency.id)
        t.map_paper("p2", data_flow.id)
        t.map_paper("p3", guards.id)
        t.map_paper("p3", resilience.id)
        t.map_paper("p4", obfuscation.id)
        t.map_paper("p4", potency.id)
        t.map_paper("p5", guards.id)
        t.map_paper("p5", resilience.id)
        t.map_paper("p6", protection.id)
        t.map_paper("p6", metric.id)
        t.set_public(True)

    platform.mutate(tax.id, build)

    def dump(name, payload):
        path = args.out / f"{name}.json"
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {path}")

    matrix, _, version = platform.matrix_view(tax.id)
    surface, _, _ = platform.surface_view(tax.id, "citation_sum", Filter())
    circles, _, _ = platform.circles_view(tax.id)
    coverage, _, _ = platform.coverage_view(tax.id)

    dump("matrix", matrix)
    dump("surface_citation_sum", {"z_property": "citation_sum", "points": surface})
    dump("circles", circles)
    dump("coverage", coverage)
    dump("document", platform.export_document(tax.id))
    dump("meta", {"taxonomy_id": tax.id, "version": version})
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
