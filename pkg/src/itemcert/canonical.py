"""Canonical JSON serialization and hashing.

Canonical form is UTF-8 JSON with lexicographically sorted object keys and no
insignificant whitespace. It is the byte form used for every digest in the
pipeline (prompt hashes, config hashes, ledger entry hashes) and for
newline-delimited ledger persistence, so two processes hashing the same value
always agree.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

ZERO_DIGEST = "0" * 64


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def digest_value(value: Any) -> str:
    """Hash of a JSON-serializable value in canonical form."""
    return sha256_hex(canonical_json(value))


def is_hex_digest(value: Any) -> bool:
    """True for exactly 64 lowercase hex characters."""
    if not isinstance(value, str) or len(value) != 64:
        return False
    return all(c in "0123456789abcdef" for c in value)
