"""On-disk cache of reduced Groebner bases, keyed by a hash of the input.

Entries are JSON files named by the SHA-256 of (arena, order, sorted
generator strings).  A loaded basis is only used if every generator of the
ideal reduces to zero against it; anything unreadable or failing that test
is recomputed and overwritten.  Writes go to a temporary file in the same
directory followed by an atomic rename, so concurrent workers are safe.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from pathlib import Path
from typing import Sequence

from .algebra.groebner import Reducer, buchberger
from .algebra.orders import MonomialOrder
from .algebra.poly import MPoly

ENV_VAR = "DPVERIFY_CACHE_DIR"
FORMAT = 1


def fingerprint(arena: Sequence[str], generators: Sequence[MPoly], order: MonomialOrder) -> str:
    payload = {
        "format": FORMAT,
        "arena": list(arena),
        "order": [order.describe(), order.nvars],
        "generators": sorted(g.to_str(strict=True) for g in generators),
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class GBCache:
    """Content-addressed store of reduced bases.

    ``min_seconds`` keeps trivial computations out of the directory.
    """

    def __init__(self, directory: str | os.PathLike, min_seconds: float = 0.05):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.min_seconds = min_seconds
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def load(self, arena, generators, order) -> list[MPoly] | None:
        p = self.path(fingerprint(arena, generators, order))
        try:
            data = json.loads(p.read_text())
            basis = [MPoly.parse(s, arena) for s in data["basis"]]
        except (OSError, ValueError, KeyError, TypeError):
            return None
        if basis:
            red = Reducer(basis, order)
            if not all(red.contains(g) for g in generators):
                return None
        elif any(generators):
            return None
        return basis

    def store(self, arena, generators, order, basis: Sequence[MPoly]) -> None:
        key = fingerprint(arena, generators, order)
        data = {"format": FORMAT, "arena": list(arena), "order": order.describe(),
                "basis": [g.to_str(strict=True) for g in basis]}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh)
            os.replace(tmp, self.path(key))
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def groebner(self, arena, generators, order, weights=None) -> list[MPoly]:
        basis = self.load(arena, generators, order)
        if basis is not None:
            self.hits += 1
            return basis
        self.misses += 1
        start = time.perf_counter()
        basis = buchberger(generators, order, weights)
        if time.perf_counter() - start >= self.min_seconds:
            self.store(arena, generators, order, basis)
        return basis


_active: GBCache | None = None


def activate(directory: str | os.PathLike | None) -> GBCache | None:
    """Route every HomogIdeal basis computation through a cache (None turns it off)."""
    global _active
    _active = GBCache(directory) if directory else None
    return _active


def active() -> GBCache | None:
    return _active


def from_environment() -> str | None:
    return os.environ.get(ENV_VAR) or None
