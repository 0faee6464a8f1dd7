"""Clock abstraction so schedules, dwell times and the siren auto-off
timer are testable: production code uses WallClock, tests use FakeClock
and advance simulated time explicitly."""

from __future__ import annotations

import datetime as dt
import time


class WallClock:
    """Real time. now() is epoch seconds, time_of_day() is local time."""

    def now(self) -> float:
        return time.time()

    def time_of_day(self) -> dt.time:
        return dt.datetime.now().time()

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)


class FakeClock:
    """Manually advanced clock anchored at a fixed start datetime."""

    def __init__(self, start: dt.datetime | None = None):
        self._start = start or dt.datetime(2025, 1, 1, 12, 0, 0)
        self._elapsed = 0.0

    def now(self) -> float:
        return self._start.timestamp() + self._elapsed

    def time_of_day(self) -> dt.time:
        return (self._start + dt.timedelta(seconds=self._elapsed)).time()

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("clock cannot run backwards")
        self._elapsed += seconds

    def set_elapsed(self, seconds: float) -> None:
        if seconds < self._elapsed:
            raise ValueError("clock cannot run backwards")
        self._elapsed = seconds

    def sleep(self, seconds: float) -> None:
        # Sleeping in fake time just advances it; nothing blocks.
        self.advance(seconds)
