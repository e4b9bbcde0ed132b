"""Injectable clocks.

Every timestamp in the system flows through one of these so that scripted
runs are byte-reproducible. Timestamps are UTC with minute resolution on
the wire; seconds are kept internally for duration arithmetic.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

WIRE_TIME_FORMAT = "%Y-%m-%dT%H:%MZ"


def format_minute(ts: datetime) -> str:
    """Render a UTC timestamp at minute resolution (``YYYY-MM-DDTHH:MMZ``)."""
    return ts.astimezone(timezone.utc).strftime(WIRE_TIME_FORMAT)


def parse_minute(text: str) -> datetime:
    return datetime.strptime(text, WIRE_TIME_FORMAT).replace(tzinfo=timezone.utc)


class SystemClock:
    """Wall clock, used by the live server."""

    def now(self) -> datetime:
        return datetime.now(timezone.utc)

    def advance(self, seconds: float) -> None:  # pragma: no cover - no-op
        pass


class FixedClock:
    """Clock frozen at a single instant."""

    def __init__(self, at: datetime):
        self._at = at

    def now(self) -> datetime:
        return self._at

    def advance(self, seconds: float) -> None:
        pass


class SyntheticClock:
    """Deterministic clock advanced explicitly by the session machinery.

    The gateway bumps it by a fixed number of seconds per processed event,
    which gives every replayed session an identical, reproducible timeline.
    """

    def __init__(self, start: datetime):
        self._now = start

    def now(self) -> datetime:
        return self._now

    def advance(self, seconds: float) -> None:
        self._now = self._now + timedelta(seconds=seconds)


# Session start used by the deterministic harness runs.
DEFAULT_SYNTHETIC_START = datetime(2025, 3, 1, 9, 30, tzinfo=timezone.utc)
