"""Hub configuration: one JSON file controls the listen address,
persistence path, device roster, mail transport, alarm timing and
automation rules. Every key is optional; defaults give a working hub.

Example::

    {
      "listen": "127.0.0.1:8032",
      "state_path": "hub_state.txt",
      "roster_path": "roster.json",
      "mail": {"mode": "capture"},
      "siren_auto_off_s": 300,
      "alarm_debounce_s": 30,
      "tick_period_s": 1.0,
      "thermostats": [{"sensor": "Temp_Living", "actuator": "Heater",
                       "setpoint": 22.0, "hysteresis": 0.5, "min_dwell_s": 60}],
      "schedules": [{"actuator": "Light_1", "on": "19:00", "off": "06:00"}],
      "panel_dir": null
    }

The roster file is a JSON array of {"id", "kind", "location"} objects;
kinds are switch, fan, siren, heater, temp_sensor, gas_sensor and
motion_sensor. When omitted the built-in roster is used.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path

from .alarms import DEFAULT_AUTO_OFF, DEFAULT_DEBOUNCE
from .automation import (
    DEFAULT_HYSTERESIS,
    DEFAULT_MIN_DWELL,
    DEFAULT_SETPOINT,
    ScheduleRule,
    ThermostatRule,
)
from .devices import DeviceKind, DeviceState, default_roster


class ConfigError(ValueError):
    pass


@dataclass
class MailSettings:
    mode: str = "capture"  # "capture" or "smtp"
    host: str = "localhost"
    port: int = 25
    sender: str = "hub@smarthome.local"
    recipients: list[str] = field(default_factory=lambda: ["owner@smarthome.local"])


@dataclass
class HubConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8032
    state_path: str = "hub_state.txt"
    roster_path: str | None = None
    mail: MailSettings = field(default_factory=MailSettings)
    siren_auto_off_s: float = DEFAULT_AUTO_OFF
    alarm_debounce_s: float = DEFAULT_DEBOUNCE
    tick_period_s: float = 1.0
    thermostats: list[ThermostatRule] = field(
        default_factory=lambda: [ThermostatRule("Temp_Living", "Heater")]
    )
    schedules: list[ScheduleRule] = field(default_factory=list)
    panel_dir: str | None = None

    @classmethod
    def load(cls, path: str | Path) -> HubConfig:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> HubConfig:
        cfg = cls()
        listen = data.get("listen")
        if listen is not None:
            host, sep, port = str(listen).rpartition(":")
            if not sep or not port.isdigit():
                raise ConfigError(f"listen must be host:port, got {listen!r}")
            cfg.listen_host, cfg.listen_port = host, int(port)
        cfg.state_path = str(data.get("state_path", cfg.state_path))
        if data.get("roster_path") is not None:
            cfg.roster_path = str(data["roster_path"])
        if data.get("panel_dir") is not None:
            cfg.panel_dir = str(data["panel_dir"])
        mail = data.get("mail", {})
        cfg.mail = MailSettings(
            mode=mail.get("mode", "capture"),
            host=mail.get("host", "localhost"),
            port=int(mail.get("port", 25)),
            sender=mail.get("sender", MailSettings().sender),
            recipients=list(mail.get("recipients", MailSettings().recipients)),
        )
        if cfg.mail.mode not in ("capture", "smtp"):
            raise ConfigError(f"mail.mode must be capture or smtp: {cfg.mail.mode!r}")
        cfg.siren_auto_off_s = float(data.get("siren_auto_off_s", cfg.siren_auto_off_s))
        cfg.alarm_debounce_s = float(data.get("alarm_debounce_s", cfg.alarm_debounce_s))
        cfg.tick_period_s = float(data.get("tick_period_s", cfg.tick_period_s))
        if "thermostats" in data:
            cfg.thermostats = [_thermostat_rule(r) for r in data["thermostats"]]
        if "schedules" in data:
            cfg.schedules = [_schedule_rule(r) for r in data["schedules"]]
        return cfg

    def load_roster(self) -> list[DeviceState]:
        if self.roster_path is None:
            return default_roster()
        try:
            entries = json.loads(Path(self.roster_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read roster {self.roster_path}: {exc}") from exc
        if not isinstance(entries, list):
            raise ConfigError("roster must be a JSON array")
        roster = []
        for entry in entries:
            try:
                kind = DeviceKind(entry["kind"])
                roster.append(
                    DeviceState(str(entry["id"]), kind, str(entry.get("location", "")))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad roster entry {entry!r}: {exc}") from exc
        return roster


def _parse_time(text: str) -> dt.time:
    try:
        return dt.time.fromisoformat(text)
    except ValueError as exc:
        raise ConfigError(f"bad time of day {text!r}: {exc}") from exc


def _thermostat_rule(raw: dict) -> ThermostatRule:
    try:
        return ThermostatRule(
            sensor_id=str(raw["sensor"]),
            actuator_id=str(raw["actuator"]),
            setpoint=float(raw.get("setpoint", DEFAULT_SETPOINT)),
            hysteresis=float(raw.get("hysteresis", DEFAULT_HYSTERESIS)),
            min_dwell=float(raw.get("min_dwell_s", DEFAULT_MIN_DWELL)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad thermostat rule {raw!r}: {exc}") from exc


def _schedule_rule(raw: dict) -> ScheduleRule:
    try:
        return ScheduleRule(
            actuator_id=str(raw["actuator"]),
            on_time=_parse_time(str(raw["on"])),
            off_time=_parse_time(str(raw["off"])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad schedule rule {raw!r}: {exc}") from exc
