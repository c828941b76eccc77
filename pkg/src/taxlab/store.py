"""Persistence and derived-view caching.

DocumentStore keeps JSON documents on disk (one file per document,
written atomically) or fully in memory when no root directory is given.
ViewCache memoizes expensive derived views keyed by taxonomy, view kind,
and filter fingerprint, with the taxonomy version deciding freshness.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Any, Callable
from urllib.parse import quote, unquote

from .errors import StorageError


class DocumentStore:
    """Flat document store: ``root/<kind>/<encoded id>.json``.

    Ids are percent-encoded in filenames, so arbitrary id strings are
    safe.  Writes go through a temp file and ``os.replace``, so readers
    never observe a half-written document.
    """

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else None
        self._memory: dict[tuple[str, str], str] = {}
        self._lock = threading.Lock()
        if self.root is not None:
            try:
                self.root.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise StorageError(f"cannot create storage root: {exc}", path=str(self.root))

    def _path(self, kind: str, doc_id: str) -> Path:
        assert self.root is not None
        return self.root / kind / (quote(doc_id, safe="") + ".json")

    def put(self, kind: str, doc_id: str, document: dict[str, Any]) -> None:
        payload = json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        if self.root is None:
            with self._lock:
                self._memory[(kind, doc_id)] = payload
            return
        path = self._path(kind, doc_id)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(payload)
                os.replace(tmp, path)
            except BaseException:
                try:
                    os.unlink(tmp)
                except OSError:
                    pass
                raise
        except OSError as exc:
            raise StorageError(f"cannot write document: {exc}", kind=kind, id=doc_id)

    def get(self, kind: str, doc_id: str) -> dict[str, Any] | None:
        if self.root is None:
            with self._lock:
                payload = self._memory.get((kind, doc_id))
            return None if payload is None else json.loads(payload)
        path = self._path(kind, doc_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise StorageError(f"cannot read document: {exc}", kind=kind, id=doc_id)
        try:
            return json.loads(text)
        except ValueError as exc:
            raise StorageError(f"corrupt document: {exc}", kind=kind, id=doc_id)

    def delete(self, kind: str, doc_id: str) -> bool:
        if self.root is None:
            with self._lock:
                return self._memory.pop((kind, doc_id), None) is not None
        path = self._path(kind, doc_id)
        try:
            path.unlink()
            return True
        except FileNotFoundError:
            return False
        except OSError as exc:
            raise StorageError(f"cannot delete document: {exc}", kind=kind, id=doc_id)

    def exists(self, kind: str, doc_id: str) -> bool:
        if self.root is None:
            with self._lock:
                return (kind, doc_id) in self._memory
        return self._path(kind, doc_id).exists()

    def list_ids(self, kind: str) -> list[str]:
        if self.root is None:
            with self._lock:
                return sorted(did for (k, did) in self._memory if k == kind)
        folder = self.root / kind
        if not folder.is_dir():
            return []
        ids = []
        for entry in folder.iterdir():
            if entry.suffix == ".json" and not entry.name.startswith(".tmp-"):
                ids.append(unquote(entry.name[: -len(".json")]))
        return sorted(ids)


class ViewCache:
    """Version-checked memo for derived views.

    An entry is fresh while its recorded taxonomy version matches the
    current one.  Strict reads rebuild synchronously under a
    per-taxonomy lock (concurrent callers collapse onto one build);
    stale-tolerant reads hand back the old value immediately and kick a
    background refresh, at most one per key at a time.
    """

    def __init__(self):
        self._entries: dict[tuple[str, str, str], tuple[int, Any]] = {}
        self._guard = threading.Lock()
        self._build_locks: dict[str, threading.Lock] = {}
        self._inflight: set[tuple[str, str, str]] = set()
        self._threads: list[threading.Thread] = []

    def _build_lock(self, taxonomy_id: str) -> threading.Lock:
        with self._guard:
            return self._build_locks.setdefault(taxonomy_id, threading.Lock())

    def peek(self, taxonomy_id: str, view_kind: str, fingerprint: str) -> tuple[int, Any] | None:
        with self._guard:
            return self._entries.get((taxonomy_id, view_kind, fingerprint))

    def store(self, taxonomy_id: str, view_kind: str, fingerprint: str, version: int, value: Any) -> None:
        key = (taxonomy_id, view_kind, fingerprint)
        with self._guard:
            old = self._entries.get(key)
            if old is None or old[0] <= version:
                self._entries[key] = (version, value)

    def invalidate(self, taxonomy_id: str) -> None:
        with self._guard:
            for key in [k for k in self._entries if k[0] == taxonomy_id]:
                del self._entries[key]

    def get_or_build(
        self,
        taxonomy_id: str,
        view_kind: str,
        fingerprint: str,
        current_version: int,
        builder: Callable[[], Any],
        allow_stale: bool = False,
        refresher: Callable[[], tuple[int, Any]] | None = None,
    ) -> tuple[Any, str, int]:
        """Return (value, status, version) with status in {"hit", "stale",
        "built"}; version is the taxonomy version the served value was
        computed at (older than ``current_version`` only for "stale").

        ``builder`` runs synchronously under this cache's per-taxonomy
        build lock.  ``refresher`` runs on a background thread and must
        synchronize on its own; it returns (version, value) to store.
        """
        key = (taxonomy_id, view_kind, fingerprint)
        with self._guard:
            entry = self._entries.get(key)
        if entry is not None and entry[0] == current_version:
            return entry[1], "hit", entry[0]
        if entry is not None and allow_stale:
            self._spawn_refresh(key, refresher or (lambda: (current_version, builder())))
            return entry[1], "stale", entry[0]
        with self._build_lock(taxonomy_id):
            with self._guard:
                entry = self._entries.get(key)
            if entry is not None and entry[0] == current_version:
                return entry[1], "hit", entry[0]
            value = builder()
            self.store(taxonomy_id, view_kind, fingerprint, current_version, value)
            return value, "built", current_version

    def _spawn_refresh(self, key: tuple[str, str, str], refresher: Callable[[], tuple[int, Any]]) -> None:
        with self._guard:
            if key in self._inflight:
                return
            self._inflight.add(key)

        def run() -> None:
            try:
                version, value = refresher()
                self.store(key[0], key[1], key[2], version, value)
            finally:
                with self._guard:
                    self._inflight.discard(key)

        thread = threading.Thread(target=run, daemon=True)
        with self._guard:
            self._threads = [t for t in self._threads if t.is_alive()]
            self._threads.append(thread)
        thread.start()

    def wait_pending(self, timeout: float | None = None) -> None:
        with self._guard:
            threads = list(self._threads)
        for thread in threads:
            thread.join(timeout)
