"""Append-only JSONL cache of solved aw values, witnesses and prime classes.

One JSON object per line, UTF-8, schema-versioned.  The file is the source of
truth: records are re-verified against the verifier on write (and optionally
on read), a key may never be re-bound to a different aw value, and a corrupt
line is reported with its line number without poisoning the rest of the file.

Concurrency: single writer, multiple readers.  Appends are serialized through
a lock and flushed as whole lines, so concurrent readers always see a
prefix-consistent file.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .model import Coloring, GroupInstance, SolverOutcome, format_coloring, parse_coloring
from .verify import is_rainbow_free

SCHEMA_VERSION = 1
DEFAULT_CACHE_ENV = "AW_CACHE"
DEFAULT_CACHE_FILE = "aw-cache.jsonl"


class StoreIntegrityError(RuntimeError):
    """A record conflicts with the store or fails re-verification."""


@dataclass(frozen=True)
class ResultRecord:
    kind: str
    n: int
    k: int
    unitary: bool
    aw_value: int
    witness: str
    nodes_explored: int
    elapsed: float
    version: str
    timestamp: float

    @property
    def key(self) -> tuple[str, int, int, bool]:
        return (self.kind, self.n, self.k, self.unitary)

    def witness_coloring(self) -> Coloring:
        return parse_coloring(self.witness)

    def verify(self) -> None:
        """Re-check the witness against the claimed aw value; raise on failure."""
        w = self.witness_coloring()
        if w.group.kind.value != self.kind or w.group.order != self.n:
            raise StoreIntegrityError(f"witness group mismatch for key {self.key}")
        if w.palette != self.aw_value - 1:
            raise StoreIntegrityError(
                f"witness palette {w.palette} != aw-1 = {self.aw_value - 1} for key {self.key}"
            )
        if not is_rainbow_free(w, self.k):
            raise StoreIntegrityError(f"witness for key {self.key} has a rainbow {self.k}-AP")
        if self.unitary:
            sizes = [0] * (w.palette + 1)
            for c in w.assignment:
                sizes[c] += 1
            if 1 not in sizes:
                raise StoreIntegrityError(f"witness for key {self.key} is not unitary")


def default_cache_path() -> Path:
    return Path(os.environ.get(DEFAULT_CACHE_ENV, DEFAULT_CACHE_FILE))


class ResultStore:
    """Durable map (kind, n, k, unitary) -> ResultRecord over an append-only file."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else default_cache_path()
        self._lock = threading.Lock()
        self._records: dict[tuple[str, int, int, bool], ResultRecord] = {}
        self.corrupt_lines: list[tuple[int, str]] = []
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    rec = ResultRecord(
                        kind=obj["kind"],
                        n=int(obj["n"]),
                        k=int(obj["k"]),
                        unitary=bool(obj["unitary"]),
                        aw_value=int(obj["aw"]),
                        witness=obj["witness"],
                        nodes_explored=int(obj.get("nodes", 0)),
                        elapsed=float(obj.get("elapsed_s", 0.0)),
                        version=obj.get("version", "unknown"),
                        timestamp=float(obj.get("timestamp", 0.0)),
                    )
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    self.corrupt_lines.append((lineno, f"{type(exc).__name__}: {exc}"))
                    continue
                existing = self._records.get(rec.key)
                if existing is not None and existing.aw_value != rec.aw_value:
                    self.corrupt_lines.append(
                        (lineno, f"conflicting aw for key {rec.key}: "
                                 f"{existing.aw_value} vs {rec.aw_value}")
                    )
                    continue
                self._records.setdefault(rec.key, rec)

    def __len__(self) -> int:
        return len(self._records)

    def get(self, kind: str, n: int, k: int, unitary: bool, *,
            verify: bool = False) -> ResultRecord | None:
        rec = self._records.get((kind, n, k, unitary))
        if rec is not None and verify:
            rec.verify()
        return rec

    def put(self, record: ResultRecord) -> None:
        """Verify, then durably append.  Same-key re-puts must agree on aw."""
        record.verify()
        with self._lock:
            existing = self._records.get(record.key)
            if existing is not None:
                if existing.aw_value != record.aw_value:
                    raise StoreIntegrityError(
                        f"key {record.key} already bound to aw={existing.aw_value}, "
                        f"refusing aw={record.aw_value}"
                    )
                return  # identical result already stored; keep the original
            line = json.dumps(
                {
                    "schema": SCHEMA_VERSION,
                    "kind": record.kind,
                    "n": record.n,
                    "k": record.k,
                    "unitary": record.unitary,
                    "aw": record.aw_value,
                    "witness": record.witness,
                    "nodes": record.nodes_explored,
                    "elapsed_s": record.elapsed,
                    "version": record.version,
                    "timestamp": record.timestamp,
                },
                separators=(",", ":"),
            )
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._records[record.key] = record

    def put_outcome(self, group: GroupInstance, k: int, unitary: bool,
                    outcome: SolverOutcome) -> ResultRecord:
        if outcome.witness is None:
            raise StoreIntegrityError("cannot store an outcome without a witness")
        rec = ResultRecord(
            kind=group.kind.value,
            n=group.order,
            k=k,
            unitary=unitary,
            aw_value=outcome.aw_value,
            witness=format_coloring(outcome.witness),
            nodes_explored=outcome.nodes_explored,
            elapsed=outcome.elapsed,
            version=__version__,
            timestamp=time.time(),
        )
        self.put(rec)
        return rec
