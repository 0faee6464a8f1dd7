"""Automatic mode: thermostat hysteresis and time-window schedule rules.

The control laws (thermostat_step, schedule_step) are pure functions; the
AutomationEngine evaluates them periodically against live registry state
and submits resulting actions through the hub's serialized gate. Nothing
here runs while auto mode is off.

Thermostat law: symmetric dead band [setpoint - h, setpoint + h]. The
heater turns on strictly below the band, off strictly above it, and holds
inside it. min_dwell seconds must elapse between flips of one actuator so
a noisy sensor cannot chatter the relay.
"""

from __future__ import annotations

import datetime as dt
import enum
import logging
import math
from dataclasses import dataclass

from .devices import Registry

logger = logging.getLogger(__name__)

DEFAULT_SETPOINT = 22.0
DEFAULT_HYSTERESIS = 0.5
DEFAULT_MIN_DWELL = 60.0


class Command(enum.Enum):
    TURN_ON = "On"
    TURN_OFF = "Off"
    HOLD = "Hold"


@dataclass(frozen=True)
class ThermostatRule:
    sensor_id: str
    actuator_id: str
    setpoint: float = DEFAULT_SETPOINT
    hysteresis: float = DEFAULT_HYSTERESIS
    min_dwell: float = DEFAULT_MIN_DWELL

    def __post_init__(self) -> None:
        if self.hysteresis <= 0:
            raise ValueError("hysteresis must be > 0")
        if self.min_dwell < 0:
            raise ValueError("min_dwell must be >= 0")


@dataclass(frozen=True)
class ScheduleRule:
    actuator_id: str
    on_time: dt.time
    off_time: dt.time

    def __post_init__(self) -> None:
        if self.on_time == self.off_time:
            raise ValueError("on_time and off_time must differ")


def thermostat_step(
    rule: ThermostatRule,
    temp: float,
    actuator_on: bool,
    seconds_since_flip: float,
) -> Command:
    """One hysteresis decision. Deterministic in its arguments."""
    if seconds_since_flip < rule.min_dwell:
        return Command.HOLD
    if temp < rule.setpoint - rule.hysteresis and not actuator_on:
        return Command.TURN_ON
    if temp > rule.setpoint + rule.hysteresis and actuator_on:
        return Command.TURN_OFF
    return Command.HOLD


def in_window(now: dt.time, on_time: dt.time, off_time: dt.time) -> bool:
    """Membership in [on_time, off_time), wrapping past midnight."""
    if on_time < off_time:
        return on_time <= now < off_time
    return now >= on_time or now < off_time


def schedule_step(rule: ScheduleRule, now: dt.time, actuator_on: bool) -> Command:
    """One schedule decision for a (possibly wrap-around) daily window."""
    inside = in_window(now, rule.on_time, rule.off_time)
    if inside and not actuator_on:
        return Command.TURN_ON
    if not inside and actuator_on:
        return Command.TURN_OFF
    return Command.HOLD


class AutomationEngine:
    """Evaluates the rule set on each tick while auto mode is on.

    Dwell accounting covers the flips this engine emits; manual commands
    always win and are simply re-evaluated on the next tick.
    """

    def __init__(
        self,
        registry: Registry,
        clock,
        thermostats: list[ThermostatRule] | None = None,
        schedules: list[ScheduleRule] | None = None,
    ):
        self._registry = registry
        self._clock = clock
        self.thermostats = list(thermostats or [])
        self.schedules = list(schedules or [])
        self._last_flip: dict[str, float] = {}

    def _seconds_since_flip(self, actuator_id: str) -> float:
        last = self._last_flip.get(actuator_id)
        if last is None:
            return math.inf
        return self._clock.now() - last

    def _apply(self, actuator_id: str, command: Command) -> tuple[str, str] | None:
        if command is Command.HOLD:
            return None
        self._registry.apply_action(actuator_id, command.value)
        self._last_flip[actuator_id] = self._clock.now()
        return (actuator_id, command.value)

    def run_tick(self) -> list[tuple[str, str]]:
        """Evaluate every rule once; returns the (target, action) pairs
        emitted. Emits nothing while auto mode is off. Rules that name an
        unknown device are skipped with a warning, never crash the loop."""
        if not self._registry.auto_mode:
            return []
        actions: list[tuple[str, str]] = []
        for rule in self.thermostats:
            sensor = self._registry.get(rule.sensor_id)
            actuator = self._registry.get(rule.actuator_id)
            if sensor is None or actuator is None:
                logger.warning(
                    "thermostat rule skipped, unknown device: %s -> %s",
                    rule.sensor_id,
                    rule.actuator_id,
                )
                continue
            command = thermostat_step(
                rule,
                sensor.status,
                actuator.status == 1,
                self._seconds_since_flip(rule.actuator_id),
            )
            emitted = self._apply(rule.actuator_id, command)
            if emitted:
                actions.append(emitted)
        for rule in self.schedules:
            actuator = self._registry.get(rule.actuator_id)
            if actuator is None:
                logger.warning(
                    "schedule rule skipped, unknown device: %s", rule.actuator_id
                )
                continue
            command = schedule_step(
                rule, self._clock.time_of_day(), actuator.status == 1
            )
            emitted = self._apply(rule.actuator_id, command)
            if emitted:
                actions.append(emitted)
        return actions
