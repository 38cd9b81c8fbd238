"""Injectable UTC clock.

Every timestamp in the pipeline flows through a clock callable so runs can be
made byte-reproducible: the CLI's --fixed-clock flag swaps the system clock
for a constant instant.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Callable

Clock = Callable[[], datetime]

FIXED_INSTANT = datetime(2025, 6, 1, 12, 0, 0, tzinfo=timezone.utc)


def system_clock() -> datetime:
    return datetime.now(timezone.utc)


def fixed_clock(instant: datetime = FIXED_INSTANT) -> Clock:
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=timezone.utc)

    def _clock() -> datetime:
        return instant

    return _clock


def to_rfc3339(moment: datetime) -> str:
    """UTC RFC 3339 text with a trailing Z; sub-second digits only when present."""
    moment = moment.astimezone(timezone.utc)
    base = moment.isoformat()
    return base.replace("+00:00", "Z")


def from_rfc3339(text: str) -> datetime:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    moment = datetime.fromisoformat(raw)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc)
