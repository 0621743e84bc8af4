"""Content-addressed on-disk cache for Gram-rank results."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

CACHE_VERSION = "qaffine-gram-1"
ENV_VAR = "QAFFINE_CACHE_DIR"


class DiskCache:
    """One JSON file per key; entries with another version stamp are ignored."""

    def __init__(self, root: str | os.PathLike, version: str = CACHE_VERSION):
        self.root = Path(root)
        self.version = version
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        digest = hashlib.sha256(f"{self.version}\n{key}".encode()).hexdigest()
        return self.root / digest[:2] / f"{digest}.json"

    def get(self, key: str) -> dict | None:
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                blob = json.load(fh)
        except (OSError, ValueError):
            self.misses += 1
            return None
        if blob.get("version") != self.version or blob.get("key") != key:
            self.misses += 1
            return None
        self.hits += 1
        return blob["value"]

    def put(self, key: str, value: dict) -> None:
        path = self._path(key)
        blob = {"version": self.version, "key": key, "value": value}
        with self._lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(blob, fh, sort_keys=True)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise


def cache_from_env(explicit: str | None) -> DiskCache | None:
    root = explicit or os.environ.get(ENV_VAR)
    return DiskCache(root) if root else None
