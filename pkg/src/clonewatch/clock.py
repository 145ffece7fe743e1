"""Clock abstraction so fixture runs produce byte-identical artifacts.

Run artifacts (reports, event logs) must not embed wall-clock times; real
times live in the run manifest. A FixedStepClock hands out deterministic,
strictly increasing timestamps for reproducible runs.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from typing import Protocol


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class Clock(Protocol):
    def now_iso(self) -> str: ...


class SystemClock:
    def now_iso(self) -> str:
        return utc_now_iso()


class FixedStepClock:
    """Deterministic clock: starts at `start` and advances `step_seconds` per call."""

    def __init__(self, start: str = "2020-10-01T00:00:00.000000Z", step_seconds: float = 1.0):
        self._current = datetime.strptime(start, "%Y-%m-%dT%H:%M:%S.%fZ").replace(
            tzinfo=timezone.utc
        )
        self._step = timedelta(seconds=step_seconds)

    def now_iso(self) -> str:
        stamp = self._current.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
        self._current += self._step
        return stamp
