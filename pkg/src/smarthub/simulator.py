"""Sensor simulator: injects readings and hazard events into a hub,
one-shot or replayed from a CSV trace.

Trace format: header ``at_s,target,value``, ``#`` comment lines allowed.
``at_s`` is the seconds offset from trace start (nondecreasing). For
sensor rows ``target`` is the sensor id and ``value`` the integer
reading; hazard rows use ``target`` = ``event:<Kind>`` with ``value``
holding the room name::

    at_s,target,value
    0,Temp_Living,18
    # heater should be on by now
    120,Temp_Living,25
    180,event:Fire,Kitchen

Replay drives the hub's tick after each applied entry, so automation and
the siren auto-off see the simulated timeline. With a FakeClock the clock
jumps to each entry's offset and replay is fully deterministic; with a
real clock the gaps are slept through, scaled by ``speed``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

from .alarms import EmptyLocation, HazardKind
from .clock import FakeClock
from .devices import DeviceError
from .hub import Hub

TRACE_HEADER = ["at_s", "target", "value"]

EVENT_PREFIX = "event:"


class TraceParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class TraceEntry:
    at: float
    target: str
    value: str

    @property
    def is_event(self) -> bool:
        return self.target.startswith(EVENT_PREFIX)


@dataclass
class ReplaySummary:
    applied: int = 0
    errors: int = 0


def parse_trace(text: str) -> list[TraceEntry]:
    """Parse trace CSV; raises TraceParseError with the 1-based line
    number of the first offending line."""
    entries: list[TraceEntry] = []
    header_seen = False
    previous_at = -math.inf
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            row = next(csv.reader(io.StringIO(line)))
        except (csv.Error, StopIteration) as exc:
            raise TraceParseError(lineno, f"bad CSV: {exc}") from exc
        if not header_seen:
            if [c.strip() for c in row] != TRACE_HEADER:
                raise TraceParseError(lineno, f"header must be {','.join(TRACE_HEADER)}")
            header_seen = True
            continue
        if len(row) != 3:
            raise TraceParseError(lineno, f"expected 3 fields, got {len(row)}")
        at_text, target, value = (c.strip() for c in row)
        try:
            at = float(at_text)
        except ValueError:
            raise TraceParseError(lineno, f"bad at_s {at_text!r}") from None
        if at < previous_at:
            raise TraceParseError(lineno, "at_s must be nondecreasing")
        previous_at = at
        if not target:
            raise TraceParseError(lineno, "empty target")
        if not target.startswith(EVENT_PREFIX):
            try:
                int(value)
            except ValueError:
                raise TraceParseError(lineno, f"bad reading {value!r}") from None
        else:
            kind_name = target[len(EVENT_PREFIX) :]
            try:
                HazardKind(kind_name)
            except ValueError:
                raise TraceParseError(lineno, f"unknown event kind {kind_name!r}") from None
        entries.append(TraceEntry(at=at, target=target, value=value))
    return entries


class SensorSim:
    """In-process stand-in for the physical sensors."""

    def __init__(self, hub: Hub):
        self._hub = hub

    def inject_reading(self, sensor_id: str, value: int) -> None:
        self._hub.inject_reading(sensor_id, value)

    def trigger_event(self, kind: HazardKind | str, location: str) -> None:
        if isinstance(kind, str):
            try:
                kind = HazardKind(kind)
            except ValueError:
                raise DeviceError(f"unknown hazard kind {kind!r}") from None
        if not location:
            raise EmptyLocation("event location must not be empty")
        self._hub.trigger_event(kind, location)

    def _apply(self, entry: TraceEntry) -> None:
        if entry.is_event:
            self.trigger_event(entry.target[len(EVENT_PREFIX) :], entry.value)
        else:
            self.inject_reading(entry.target, int(entry.value))

    def replay(self, trace: str | Path, speed: float = 1.0) -> ReplaySummary:
        """Apply a trace file in order against the hub clock.

        ``speed`` scales wall-clock pacing (math.inf or 0 = no waiting);
        under a FakeClock the clock is advanced to each entry's offset
        instead and nothing sleeps. Application errors (unknown sensor,
        bad event) are counted and skipped; the replay always finishes.
        """
        entries = parse_trace(Path(trace).read_text(encoding="utf-8"))
        summary = ReplaySummary()
        clock = self._hub.clock
        fake = isinstance(clock, FakeClock)
        previous_at = 0.0
        for entry in entries:
            if fake:
                clock.advance(entry.at - previous_at)
            elif speed > 0 and not math.isinf(speed):
                clock.sleep((entry.at - previous_at) / speed)
            previous_at = entry.at
            try:
                self._apply(entry)
                summary.applied += 1
            except (DeviceError, EmptyLocation):
                summary.errors += 1
            self._hub.tick()
        return summary
