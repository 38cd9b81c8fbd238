"""Embedded record store with optimistic concurrency.

Current record state lives in SQLite keyed by item id, with the record's
version counter as the concurrency token: updates are compare-and-set, so of
any number of concurrent writers exactly one wins and the rest see a version
conflict. History is not kept here; the audit ledger is the source of truth
for what happened, the store only answers "what is the record now".
"""

from __future__ import annotations

import sqlite3
import threading
from pathlib import Path

from itemcert.clock import to_rfc3339
from itemcert.errors import RecordNotFound, StorageFailure, VersionConflict
from itemcert.model import CertificationRecord, Status

_SCHEMA = """
CREATE TABLE IF NOT EXISTS records (
    item_id    TEXT PRIMARY KEY,
    status     TEXT NOT NULL,
    label      TEXT NOT NULL,
    version    INTEGER NOT NULL,
    created_at TEXT NOT NULL,
    data       TEXT NOT NULL
)
"""


class RecordStore:
    """Thread-safe current-state store for certification records."""

    def __init__(self, path: str | Path = ":memory:"):
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.execute(_SCHEMA)
            self._conn.commit()

    def close(self):
        with self._lock:
            self._conn.close()

    def put(self, record: CertificationRecord):
        """Insert a new record; replacing an existing id is a storage error."""
        with self._lock:
            try:
                self._conn.execute(
                    "INSERT INTO records (item_id, status, label, version, created_at, data) "
                    "VALUES (?, ?, ?, ?, ?, ?)",
                    (
                        record.item.id,
                        record.status.value,
                        record.label.value,
                        record.version,
                        to_rfc3339(record.provenance.generated_at),
                        record.to_json(),
                    ),
                )
                self._conn.commit()
            except sqlite3.IntegrityError as exc:
                raise StorageFailure(f"record {record.item.id!r} already exists") from exc

    def get(self, item_id: str) -> CertificationRecord:
        with self._lock:
            row = self._conn.execute(
                "SELECT data FROM records WHERE item_id = ?", (item_id,)
            ).fetchone()
        if row is None:
            raise RecordNotFound(f"no record for item {item_id!r}")
        return CertificationRecord.from_json(row[0])

    def compare_and_swap(self, expected_version: int, record: CertificationRecord):
        """Replace an existing record iff its stored version equals expected_version."""
        with self._lock:
            cursor = self._conn.execute(
                "UPDATE records SET status = ?, label = ?, version = ?, data = ? "
                "WHERE item_id = ? AND version = ?",
                (
                    record.status.value,
                    record.label.value,
                    record.version,
                    record.to_json(),
                    record.item.id,
                    expected_version,
                ),
            )
            self._conn.commit()
            if cursor.rowcount == 1:
                return
            exists = self._conn.execute(
                "SELECT version FROM records WHERE item_id = ?", (record.item.id,)
            ).fetchone()
        if exists is None:
            raise RecordNotFound(f"no record for item {record.item.id!r}")
        raise VersionConflict(
            f"record {record.item.id!r} is at version {exists[0]}, "
            f"caller expected {expected_version}"
        )

    _STATUS_FILTERS = {
        "all": None,
        "yellow": Status.PENDING_REVIEW.value,
        "pending_review": Status.PENDING_REVIEW.value,
        "green": Status.AUTO_CERTIFIED.value,
        "auto_certified": Status.AUTO_CERTIFIED.value,
        "certified_human": Status.CERTIFIED_HUMAN.value,
        "rejected": Status.REJECTED.value,
    }

    @classmethod
    def status_filters(cls) -> tuple:
        return tuple(cls._STATUS_FILTERS)

    def page(self, status_filter: str = "all", page: int = 1, page_size: int = 50):
        """One page of records ordered by creation time then id; returns (records, total)."""
        status = self._STATUS_FILTERS.get(status_filter)
        where = "" if status is None else "WHERE status = ?"
        params: tuple = () if status is None else (status,)
        with self._lock:
            total = self._conn.execute(
                f"SELECT COUNT(*) FROM records {where}", params
            ).fetchone()[0]
            rows = self._conn.execute(
                f"SELECT data FROM records {where} ORDER BY created_at, item_id "
                "LIMIT ? OFFSET ?",
                params + (page_size, (page - 1) * page_size),
            ).fetchall()
        return [CertificationRecord.from_json(row[0]) for row in rows], total

    def all_records(self) -> list:
        with self._lock:
            rows = self._conn.execute(
                "SELECT data FROM records ORDER BY created_at, item_id"
            ).fetchall()
        return [CertificationRecord.from_json(row[0]) for row in rows]

    def count(self, status_filter: str = "all") -> int:
        status = self._STATUS_FILTERS.get(status_filter)
        where = "" if status is None else "WHERE status = ?"
        params: tuple = () if status is None else (status,)
        with self._lock:
            return self._conn.execute(
                f"SELECT COUNT(*) FROM records {where}", params
            ).fetchone()[0]
