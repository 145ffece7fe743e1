"""File-backed page cache, query cache and append-only run event ledger.

Plain files over an embedded database: an investigative tool's artifacts
should be transparent and diffable. Cache keys are hashed for filenames;
ledger lines carry per-line checksums so a torn tail or corrupted line is
detected on replay.
"""

from __future__ import annotations

import errno
import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaViolation, StorageFull, TornWrite

logger = logging.getLogger(__name__)

EVENT_KINDS = {
    "RunStarted",
    "HarvestDone",
    "QueryExecuted",
    "CandidateSurfaced",
    "EvidenceAttached",
    "VerdictRecorded",
    "IterationClosed",
    "RunFinished",
}


@dataclass(frozen=True)
class LedgerEvent:
    run_id: str
    seq: int
    kind: str
    payload: dict
    at: str

    def to_json(self) -> dict:
        return {
            "run_id": self.run_id,
            "seq": self.seq,
            "kind": self.kind,
            "payload": self.payload,
            "at": self.at,
        }


def _canonical(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _line_checksum(body: dict) -> str:
    return hashlib.sha256(_canonical(body).encode("utf-8")).hexdigest()[:16]


class Store:
    """One data root holding caches and per-run ledgers.

    Layout:
        <root>/cache/<namespace>/<sha256(key)>.json
        <root>/runs/<run-id>/events.jsonl
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._ledger_locks: dict[str, threading.Lock] = {}
        self._next_seq: dict[str, int] = {}
        self._guard = threading.Lock()

    # -- cache ---------------------------------------------------------

    def _cache_path(self, namespace: str, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.root / "cache" / namespace / f"{digest}.json"

    def cache_put(self, namespace: str, key: str, value: bytes,
                  ttl: float | None = None) -> None:
        path = self._cache_path(namespace, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {
            "key": key,
            "stored_at": time.time(),
            "ttl": ttl,
            "checksum": hashlib.sha256(value).hexdigest(),
            "value_hex": value.hex(),
        }
        tmp = path.with_suffix(".tmp")
        try:
            tmp.write_text(json.dumps(entry), encoding="utf-8")
            tmp.replace(path)
        except OSError as exc:
            if exc.errno == errno.ENOSPC:
                raise StorageFull(str(exc)) from exc
            raise

    def cache_get(self, namespace: str, key: str) -> bytes | None:
        path = self._cache_path(namespace, key)
        if not path.is_file():
            return None
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            value = bytes.fromhex(entry["value_hex"])
        except (ValueError, KeyError):
            logger.warning("corrupt cache entry (unreadable): %s", path)
            return None
        if hashlib.sha256(value).hexdigest() != entry.get("checksum"):
            logger.warning("corrupt cache entry (checksum mismatch): %s", path)
            return None
        ttl = entry.get("ttl")
        if ttl is not None and time.time() - entry["stored_at"] >= ttl:
            return None
        return value

    # -- run ledger ------------------------------------------------------

    def run_dir(self, run_id: str) -> Path:
        return self.root / "runs" / run_id

    def _events_path(self, run_id: str) -> Path:
        return self.run_dir(run_id) / "events.jsonl"

    def _lock_for(self, run_id: str) -> threading.Lock:
        with self._guard:
            return self._ledger_locks.setdefault(run_id, threading.Lock())

    def ledger_append(self, run_id: str, kind: str, payload: dict, at: str) -> int:
        """Append one event; returns its sequence number (gap-free, from 1)."""
        if kind not in EVENT_KINDS:
            raise SchemaViolation(f"unknown event kind {kind!r}")
        try:
            json.dumps(payload)
        except (TypeError, ValueError) as exc:
            raise SchemaViolation(f"payload not JSON-serializable: {exc}") from exc
        with self._lock_for(run_id):
            if run_id not in self._next_seq:
                self._next_seq[run_id] = self._scan_next_seq(run_id)
            seq = self._next_seq[run_id]
            body = {"run_id": run_id, "seq": seq, "kind": kind,
                    "payload": payload, "at": at}
            line = _canonical({**body, "check": _line_checksum(body)})
            path = self._events_path(run_id)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8") as fp:
                fp.write(line + "\n")
                fp.flush()
            self._next_seq[run_id] = seq + 1
            return seq

    def _scan_next_seq(self, run_id: str) -> int:
        last = 0
        for event in self.ledger_events(run_id):
            last = event.seq
        return last + 1

    def ledger_events(self, run_id: str) -> list[LedgerEvent]:
        """All verified events, in order.

        A trailing partial line (crash tail) is dropped with a warning; a
        structurally complete line with a bad checksum raises TornWrite.
        """
        path = self._events_path(run_id)
        if not path.is_file():
            return []
        events: list[LedgerEvent] = []
        with path.open("r", encoding="utf-8") as fp:
            raw = fp.read()
        lines = raw.split("\n")
        trailing = lines[-1]
        complete = lines[:-1]
        if trailing.strip():
            try:
                json.loads(trailing)
                # parseable but unterminated: treat as torn tail
                logger.warning("dropping unterminated ledger tail in %s", path)
            except ValueError:
                logger.warning("dropping torn ledger tail in %s", path)
        for idx, line in enumerate(complete, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except ValueError as exc:
                raise TornWrite(f"{path}:{idx}: unparseable event line") from exc
            check = data.pop("check", None)
            if check != _line_checksum(data):
                raise TornWrite(f"{path}:{idx}: checksum mismatch")
            expected = len(events) + 1
            if data["seq"] != expected:
                raise TornWrite(
                    f"{path}:{idx}: sequence gap (got {data['seq']}, want {expected})"
                )
            events.append(
                LedgerEvent(run_id=data["run_id"], seq=data["seq"],
                            kind=data["kind"], payload=data["payload"],
                            at=data["at"])
            )
        return events

    def list_runs(self) -> list[str]:
        runs_dir = self.root / "runs"
        if not runs_dir.is_dir():
            return []
        return sorted(p.name for p in runs_dir.iterdir() if p.is_dir())
