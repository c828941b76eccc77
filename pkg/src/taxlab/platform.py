"""Application façade: taxonomies, reviews, views, and persistence.

One Platform owns the document store, the review board, the view cache,
and an in-memory working set of taxonomies guarded by per-taxonomy
re-entrant locks.  All mutations land here so version preconditions,
persistence, and cache bookkeeping stay in one place.
"""

from __future__ import annotations

import threading
from typing import Any, Callable, Sequence

from .analysis import (
    Filter,
    build_matrix,
    build_surface,
    coverage_report,
)
from .biblio import Paper
from .canonical import taxonomy_to_document, taxonomy_from_document
from .circles import layout_circles
from .errors import NameConflictError, NotFoundError, VersionConflictError
from .importer import MatchConfig, suggest_mappings
from .model import Taxonomy
from .review import ReviewBoard
from .store import DocumentStore, ViewCache

TAXONOMY_KIND = "taxonomy"


class Platform:
    def __init__(self, store: DocumentStore | None = None):
        self.store = store or DocumentStore(None)
        self.cache = ViewCache()
        self.board = ReviewBoard(self.store)
        self._taxonomies: dict[str, Taxonomy] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.RLock()

    # -- working set -------------------------------------------------------

    def _lock_for(self, taxonomy_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks.setdefault(taxonomy_id, threading.RLock())

    def _load(self, taxonomy_id: str) -> Taxonomy:
        with self._registry_lock:
            tax = self._taxonomies.get(taxonomy_id)
            if tax is not None:
                return tax
            document = self.store.get(TAXONOMY_KIND, taxonomy_id)
            if document is None:
                raise NotFoundError("taxonomy not found", taxonomy_id=taxonomy_id)
            tax = taxonomy_from_document(document)
            self._taxonomies[taxonomy_id] = tax
            return tax

    def _persist(self, tax: Taxonomy) -> None:
        self.store.put(TAXONOMY_KIND, tax.id, taxonomy_to_document(tax))

    def get_taxonomy(self, taxonomy_id: str) -> Taxonomy:
        return self._load(taxonomy_id)

    def list_taxonomies(self) -> list[Taxonomy]:
        with self._registry_lock:
            for tid in self.store.list_ids(TAXONOMY_KIND):
                if tid not in self._taxonomies:
                    self._load(tid)
            return sorted(self._taxonomies.values(), key=lambda t: (t.name.casefold(), t.id))

    # -- lifecycle ---------------------------------------------------------

    def create_taxonomy(self, name: str) -> Taxonomy:
        tax = Taxonomy.create(name)
        with self._registry_lock:
            self._taxonomies[tax.id] = tax
        self._persist(tax)
        return tax

    def delete_taxonomy(self, taxonomy_id: str) -> None:
        with self._lock_for(taxonomy_id):
            self._load(taxonomy_id)
            with self._registry_lock:
                self._taxonomies.pop(taxonomy_id, None)
            self.store.delete(TAXONOMY_KIND, taxonomy_id)
            self.cache.invalidate(taxonomy_id)

    def _unique_name(self, wanted: str) -> str:
        taken = {t.name.casefold() for t in self.list_taxonomies()}
        if wanted.casefold() not in taken:
            return wanted
        i = 2
        while f"{wanted} {i}".casefold() in taken:
            i += 1
        return f"{wanted} {i}"

    def fork_taxonomy(self, taxonomy_id: str, name: str | None = None) -> Taxonomy:
        with self._lock_for(taxonomy_id):
            source = self._load(taxonomy_id)
            fork = source.fork(name=self._unique_name(name or f"{source.name} (fork)"))
        with self._registry_lock:
            self._taxonomies[fork.id] = fork
        self._persist(fork)
        return fork

    def merge_fork(self, taxonomy_id: str, fork_id: str, expected_version: int | None = None):
        if taxonomy_id == fork_id:
            raise NameConflictError("cannot merge a taxonomy into itself", taxonomy_id=taxonomy_id)
        first, second = sorted((taxonomy_id, fork_id))
        with self._lock_for(first), self._lock_for(second):
            target = self._load(taxonomy_id)
            fork = self._load(fork_id)
            if expected_version is not None and target.version != expected_version:
                raise VersionConflictError(
                    "taxonomy changed since it was read",
                    expected_version=expected_version,
                    current_version=target.version,
                )
            report = target.merge_fork(fork)
            self._persist(target)
            return report

    # -- mutation gate -----------------------------------------------------

    def mutate(
        self,
        taxonomy_id: str,
        fn: Callable[[Taxonomy], Any],
        expected_version: int | None = None,
    ) -> Any:
        """Run a mutation under the taxonomy lock and persist the result.

        ``expected_version`` is an optimistic precondition: when given and
        stale, the mutation is rejected before running.
        """
        with self._lock_for(taxonomy_id):
            tax = self._load(taxonomy_id)
            if expected_version is not None and tax.version != expected_version:
                raise VersionConflictError(
                    "taxonomy changed since it was read",
                    expected_version=expected_version,
                    current_version=tax.version,
                )
            result = fn(tax)
            self._persist(tax)
            return result

    # -- documents ---------------------------------------------------------

    def export_document(self, taxonomy_id: str) -> dict[str, Any]:
        with self._lock_for(taxonomy_id):
            return taxonomy_to_document(self._load(taxonomy_id))

    def import_document(self, document: dict[str, Any], replace: bool = False) -> Taxonomy:
        tax = taxonomy_from_document(document)
        with self._lock_for(tax.id):
            exists = self.store.exists(TAXONOMY_KIND, tax.id)
            if exists and not replace:
                raise NameConflictError(
                    "taxonomy already exists; import with replace to overwrite",
                    taxonomy_id=tax.id,
                )
            with self._registry_lock:
                self._taxonomies[tax.id] = tax
            self._persist(tax)
            self.cache.invalidate(tax.id)
            return tax

    # -- literature import ---------------------------------------------------

    def import_corpus(
        self,
        taxonomy_id: str,
        papers: Sequence[Paper],
        config: MatchConfig,
        dry_run: bool = False,
        expected_version: int | None = None,
    ) -> dict[str, Any]:
        """Suggest mappings for each paper; apply them unless dry_run."""
        suggested = 0
        applied = 0
        per_paper: list[dict[str, Any]] = []
        with self._lock_for(taxonomy_id):
            tax = self._load(taxonomy_id)
            if expected_version is not None and tax.version != expected_version:
                raise VersionConflictError(
                    "taxonomy changed since it was read",
                    expected_version=expected_version,
                    current_version=tax.version,
                )
            for paper in papers:
                suggestions = suggest_mappings(paper, tax, config)
                suggested += len(suggestions)
                per_paper.append(
                    {"paper_id": paper.id, "suggestions": [s.to_dict() for s in suggestions]}
                )
                if not dry_run and suggestions:
                    tax.register_paper(paper)
                    applied += tax.apply_suggestions(suggestions)
            if not dry_run:
                self._persist(tax)
        return {
            "papers": len(papers),
            "suggested": suggested,
            "applied": applied,
            "dry_run": dry_run,
            "details": per_paper,
        }

    # -- derived views -------------------------------------------------------

    def _view(
        self,
        taxonomy_id: str,
        view_kind: str,
        fingerprint: str,
        compute: Callable[[Taxonomy], Any],
        allow_stale: bool,
    ) -> tuple[Any, str, int]:
        lock = self._lock_for(taxonomy_id)
        with lock:
            version = self._load(taxonomy_id).version

        def build() -> Any:
            with lock:
                return compute(self._load(taxonomy_id))

        def refresh() -> tuple[int, Any]:
            with lock:
                tax = self._load(taxonomy_id)
                return tax.version, compute(tax)

        value, status, served_version = self.cache.get_or_build(
            taxonomy_id,
            view_kind,
            fingerprint,
            version,
            build,
            allow_stale=allow_stale,
            refresher=refresh,
        )
        return value, status, served_version

    def matrix_view(
        self, taxonomy_id: str, flt: Filter | None = None, allow_stale: bool = False
    ) -> tuple[dict[str, Any], str, int]:
        flt = flt or Filter()
        return self._view(
            taxonomy_id,
            "matrix",
            flt.fingerprint(),
            lambda tax: build_matrix(tax, flt).to_dict(),
            allow_stale,
        )

    def surface_view(
        self,
        taxonomy_id: str,
        z_property: str,
        flt: Filter | None = None,
        allow_stale: bool = False,
    ) -> tuple[list[dict[str, Any]], str, int]:
        flt = flt or Filter()

        def compute(tax: Taxonomy) -> list[dict[str, Any]]:
            base = build_matrix(tax, flt)
            return [p.to_dict() for p in build_surface(tax, flt, z_property, base)]

        return self._view(
            taxonomy_id, f"surface:{z_property}", flt.fingerprint(), compute, allow_stale
        )

    def circles_view(
        self, taxonomy_id: str, allow_stale: bool = False
    ) -> tuple[dict[str, Any], str, int]:
        return self._view(
            taxonomy_id, "circles", "-", lambda tax: layout_circles(tax).to_dict(), allow_stale
        )

    def coverage_view(
        self, taxonomy_id: str, allow_stale: bool = False
    ) -> tuple[dict[str, Any], str, int]:
        return self._view(
            taxonomy_id, "coverage", "-", lambda tax: coverage_report(tax).to_dict(), allow_stale
        )
