"""Tamper-evident, append-only audit ledger.

Entries form a SHA-256 hash chain with a zero genesis: each entry hashes its
predecessor's hash concatenated with the canonical serialization of its own
(index, timestamp, event_type, payload). Persistence is one canonical JSON
entry per line in an append-only UTF-8 file; every append is flushed and
fsynced before returning. Rotation starts a new file whose genesis prev_hash
is the previous file's final entry hash, preserving chain continuity.

Writers are serialized through a lock (single-writer contract); reads operate
on immutable snapshots.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from itemcert.canonical import ZERO_DIGEST, canonical_json, is_hex_digest, sha256_hex
from itemcert.clock import Clock, from_rfc3339, system_clock, to_rfc3339
from itemcert.errors import StorageFailure

GENESIS_PREV_HASH = ZERO_DIGEST


class EventType(str, Enum):
    ITEM_INGESTED = "item_ingested"
    CERTIFIED = "certified"
    REVIEW_SUBMITTED = "review_submitted"
    OVERRIDDEN = "overridden"
    REPORT_EXPORTED = "report_exported"
    REGENERATION_REQUESTED = "regeneration_requested"


@dataclass(frozen=True)
class AuditEntry:
    index: int
    timestamp: str  # RFC 3339 UTC text, hashed verbatim
    event_type: EventType
    payload: Any
    prev_hash: str
    entry_hash: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "timestamp": self.timestamp,
            "event_type": self.event_type.value,
            "payload": self.payload,
            "prev_hash": self.prev_hash,
            "entry_hash": self.entry_hash,
        }

    def to_line(self) -> str:
        return canonical_json(self.to_dict())


def entry_hash(prev_hash: str, index: int, timestamp: str, event_type: str, payload: Any) -> str:
    body = canonical_json(
        {"index": index, "timestamp": timestamp, "event_type": event_type, "payload": payload}
    )
    return sha256_hex(prev_hash + body)


@dataclass(frozen=True)
class ChainStatus:
    valid: bool
    first_bad_index: int | None = None
    detail: str = ""

    @classmethod
    def ok(cls) -> "ChainStatus":
        return cls(valid=True)

    @classmethod
    def bad(cls, index: int, detail: str) -> "ChainStatus":
        return cls(valid=False, first_bad_index=index, detail=detail)


_ENTRY_FIELDS = {"index", "timestamp", "event_type", "payload", "prev_hash", "entry_hash"}


def _check_line(raw: str, position: int, prev_hash: str) -> tuple[AuditEntry | None, str]:
    """Validate one persisted line; returns (entry, "") or (None, reason)."""
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        return None, f"not valid JSON: {exc}"
    if not isinstance(data, dict) or set(data) != _ENTRY_FIELDS:
        return None, "entry does not have exactly the six ledger fields"
    if data["index"] != position:
        return None, f"index {data['index']!r} does not match position {position}"
    try:
        event = EventType(data["event_type"])
    except (ValueError, TypeError):
        return None, f"unknown event type {data['event_type']!r}"
    if not isinstance(data["timestamp"], str):
        return None, "timestamp is not a string"
    try:
        from_rfc3339(data["timestamp"])
    except ValueError:
        return None, f"timestamp {data['timestamp']!r} is not RFC 3339"
    for hash_field in ("prev_hash", "entry_hash"):
        if not is_hex_digest(data[hash_field]):
            return None, f"{hash_field} is not 64 lowercase hex characters"
    if data["prev_hash"] != prev_hash:
        return None, "prev_hash does not match the previous entry hash"
    expected = entry_hash(
        data["prev_hash"], position, data["timestamp"], data["event_type"], data["payload"]
    )
    if data["entry_hash"] != expected:
        return None, "entry_hash does not match the recomputed digest"
    return (
        AuditEntry(
            index=position,
            timestamp=data["timestamp"],
            event_type=event,
            payload=data["payload"],
            prev_hash=data["prev_hash"],
            entry_hash=data["entry_hash"],
        ),
        "",
    )


def _read_lines(source) -> list[str]:
    if isinstance(source, Ledger):
        return [entry.to_line() for entry in source.entries()]
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            return []
        text = path.read_text(encoding="utf-8")
        return text.splitlines()
    return [line.rstrip("\n") for line in source]


def verify_chain(source, genesis_prev_hash: str = GENESIS_PREV_HASH) -> ChainStatus:
    """Valid iff every entry's chain invariants hold; else the smallest bad index.

    ``source`` may be a Ledger, a file path, or an iterable of raw lines. An
    empty ledger is vacuously valid.
    """
    prev = genesis_prev_hash
    for position, raw in enumerate(_read_lines(source)):
        entry, reason = _check_line(raw, position, prev)
        if entry is None:
            return ChainStatus.bad(position, reason)
        prev = entry.entry_hash
    return ChainStatus.ok()


class Ledger:
    """Append-only event log; in-memory when no path is given."""

    def __init__(
        self,
        path: str | Path | None = None,
        clock: Clock = system_clock,
        genesis_prev_hash: str = GENESIS_PREV_HASH,
    ):
        self._path = Path(path) if path is not None else None
        self._clock = clock
        self._genesis = genesis_prev_hash
        self._lock = threading.Lock()
        self._entries: list[AuditEntry] = []
        self._last_hash = genesis_prev_hash
        if self._path is not None and self._path.exists():
            self._recover()

    def _recover(self):
        """Replay the persisted file; refuse to append onto a broken chain."""
        lines = _read_lines(self._path)
        prev = self._genesis
        for position, raw in enumerate(lines):
            entry, reason = _check_line(raw, position, prev)
            if entry is None:
                raise StorageFailure(
                    f"ledger {self._path} fails verification at entry {position}: {reason}"
                )
            self._entries.append(entry)
            prev = entry.entry_hash
        self._last_hash = prev

    @property
    def path(self) -> Path | None:
        return self._path

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> tuple[AuditEntry, ...]:
        with self._lock:
            return tuple(self._entries)

    def last_hash(self) -> str:
        with self._lock:
            return self._last_hash

    def append(self, event_type: EventType, payload: Any) -> AuditEntry:
        """Append one event; the entry is durable on disk before returning."""
        with self._lock:
            index = len(self._entries)
            timestamp = to_rfc3339(self._clock())
            digest = entry_hash(self._last_hash, index, timestamp, event_type.value, payload)
            entry = AuditEntry(
                index=index,
                timestamp=timestamp,
                event_type=event_type,
                payload=payload,
                prev_hash=self._last_hash,
                entry_hash=digest,
            )
            if self._path is not None:
                try:
                    with open(self._path, "a", encoding="utf-8") as handle:
                        handle.write(entry.to_line() + "\n")
                        handle.flush()
                        os.fsync(handle.fileno())
                except OSError as exc:
                    raise StorageFailure(f"cannot append to ledger {self._path}: {exc}") from exc
            self._entries.append(entry)
            self._last_hash = digest
            return entry

    def rotate(self, new_path: str | Path) -> "Ledger":
        """Start a fresh file whose genesis prev_hash continues this chain."""
        new_path = Path(new_path)
        if new_path.exists():
            raise StorageFailure(f"rotation target {new_path} already exists")
        with self._lock:
            return Ledger(new_path, clock=self._clock, genesis_prev_hash=self._last_hash)

    def count(self, event_type: EventType) -> int:
        return sum(1 for entry in self._entries if entry.event_type is event_type)
