"""Hub core: runs the perform-operation procedure for every command
packet (authenticate, act, respond), owns the registry gate, and persists
credentials and device state across restarts.

Every request starts from a fresh pending response with code 404; only a
successful path overwrites it. Failures of any sort answer ``404`` with
an empty status list and change nothing.

The state file is a human-readable key-value format, written atomically
(temp file + rename)::

    password=1234
    auto=0
    fan_speed=0
    device.Light_1=1
"""

from __future__ import annotations

import logging
import os
import tempfile
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .alarms import AlarmEngine, AlarmEvent, CaptureTransport, HazardKind, SmtpTransport
from .automation import AutomationEngine
from .clock import WallClock
from .codec import MalformedPacket, ResponsePacket, parse_command
from .config import HubConfig
from .devices import DeviceError, Registry

logger = logging.getLogger(__name__)

DEFAULT_PASSWORD = "1234"

STATE_HEADER = "# smarthub state v1"


class CorruptStateFile(Exception):
    """Persistence file exists but cannot be trusted; refuse to start
    rather than silently reset (that would downgrade the credential)."""


@dataclass
class PendingResponse:
    """Per-request response state, initialized to 404 before any check."""

    code: int = 404
    statuses: list[tuple[str, int]] = field(default_factory=list)

    def packet(self) -> ResponsePacket:
        return ResponsePacket(code=self.code, statuses=tuple(self.statuses))


class Hub:
    """One smart-home hub instance.

    All state mutation (commands, sensor injection, automation, alarms)
    is serialized through ``gate``. Construct via :meth:`boot` so the
    credential and device statuses survive restarts.
    """

    def __init__(
        self,
        config: HubConfig | None = None,
        clock=None,
        mail_transport=None,
        registry: Registry | None = None,
        password: str = DEFAULT_PASSWORD,
    ):
        self.config = config or HubConfig()
        self.clock = clock or WallClock()
        self.gate = threading.RLock()
        self.registry = registry or Registry(self.config.load_roster())
        self._password = password
        if mail_transport is None:
            if self.config.mail.mode == "smtp":
                mail_transport = SmtpTransport(
                    self.config.mail.host,
                    self.config.mail.port,
                    self.config.mail.sender,
                )
            else:
                mail_transport = CaptureTransport()
        self.mail_transport = mail_transport
        self.alarms = AlarmEngine(
            self.registry,
            self.clock,
            mail_transport,
            self.config.mail.recipients,
            self.gate,
            auto_off_after=self.config.siren_auto_off_s,
            debounce_window=self.config.alarm_debounce_s,
        )
        self.registry.siren_release_hook = self.alarms.manual_release
        self.automation = AutomationEngine(
            self.registry,
            self.clock,
            thermostats=self.config.thermostats,
            schedules=self.config.schedules,
        )

    # ------------------------------------------------------------------
    # command handling

    @property
    def password(self) -> str:
        return self._password

    def handle_command(self, raw: str) -> ResponsePacket:
        """Run one command packet through parse, authenticate, act.

        Never raises: every failure becomes a ``404`` response with no
        state change. Successful actions answer ``200`` plus a full wire
        snapshot so the client can synchronize; a password change answers
        ``201``.
        """
        pending = PendingResponse()
        try:
            pkt = parse_command(raw)
        except MalformedPacket:
            return pending.packet()
        mutated = False
        with self.gate:
            if pkt.auth != self._password:
                return pending.packet()
            if pkt.target == "ChangePass":
                self._password = pkt.action
                pending.code = 201
                mutated = True
            else:
                try:
                    pending.code = self.registry.apply_action(pkt.target, pkt.action)
                except DeviceError as exc:
                    logger.debug("action rejected: %s", exc)
                    return pending.packet()
                pending.statuses = self.registry.wire_snapshot()
                mutated = pkt.target != "Status"
            state = self._state_lines() if mutated else None
        if state is not None:
            self._write_state(state)
        return pending.packet()

    def inject_reading(self, sensor_id: str, value: int) -> None:
        """Set a sensor's value; stands in for the physical sensors."""
        with self.gate:
            self.registry.set_sensor_value(sensor_id, value)
            state = self._state_lines()
        self._write_state(state)

    def trigger_event(self, kind: HazardKind, location: str) -> None:
        """Deliver a hazard event to the alarm engine."""
        event = AlarmEvent(kind=kind, location=location, at=self.clock.now())
        self.alarms.on_event(event)
        with self.gate:
            state = self._state_lines()
        self._write_state(state)

    def tick(self) -> list[tuple[str, str]]:
        """One periodic evaluation turn: automation rules (when auto mode
        is on) plus the siren auto-off check. Returns emitted actions."""
        with self.gate:
            actions = self.automation.run_tick()
            if self.alarms.check_auto_off():
                actions.append(("Siren", "Off"))
            state = self._state_lines() if actions else None
        if state is not None:
            self._write_state(state)
        return actions

    # ------------------------------------------------------------------
    # persistence

    @classmethod
    def boot(
        cls,
        config: HubConfig | None = None,
        clock=None,
        mail_transport=None,
        state_path: str | None = None,
    ) -> "Hub":
        """Build a hub, restoring credential, device statuses and auto
        mode from the state file when one exists.

        Raises CorruptStateFile when the file is present but unparseable.
        """
        config = config or HubConfig()
        if state_path is not None:
            config.state_path = state_path
        hub = cls(config=config, clock=clock, mail_transport=mail_transport)
        path = Path(config.state_path)
        if path.exists():
            hub._restore(path)
        return hub

    def _restore(self, path: Path) -> None:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CorruptStateFile(f"cannot read {path}: {exc}") from exc
        password = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise CorruptStateFile(f"{path}:{lineno}: not a key=value line")
            if key == "password":
                if not value or "$" in value:
                    raise CorruptStateFile(f"{path}:{lineno}: invalid password")
                password = value
            elif key == "auto":
                if value not in ("0", "1"):
                    raise CorruptStateFile(f"{path}:{lineno}: auto must be 0/1")
                self.registry.auto_mode = value == "1"
            elif key == "fan_speed":
                if value not in ("0", "1", "2", "3"):
                    raise CorruptStateFile(f"{path}:{lineno}: fan_speed out of range")
                self.registry.fan_speed = int(value)
            elif key.startswith("device."):
                dev = self.registry.get(key[len("device.") :])
                if dev is None:
                    raise CorruptStateFile(f"{path}:{lineno}: unknown device {key!r}")
                if not value.isdigit():
                    raise CorruptStateFile(f"{path}:{lineno}: bad status {value!r}")
                dev.status = int(value)
            else:
                raise CorruptStateFile(f"{path}:{lineno}: unknown key {key!r}")
        if password is None:
            raise CorruptStateFile(f"{path}: missing password entry")
        self._password = password

    def _state_lines(self) -> str:
        """Serialize persistable state; call under the gate so the copy
        is consistent, write it outside."""
        lines = [
            STATE_HEADER,
            f"password={self._password}",
            f"auto={int(self.registry.auto_mode)}",
            f"fan_speed={self.registry.fan_speed}",
        ]
        lines.extend(f"device.{d.id}={d.status}" for d in self.registry.devices)
        return "\n".join(lines) + "\n"

    def _write_state(self, content: str) -> bool:
        """Atomic write: temp file in the target directory, then rename.
        IO failure is logged and swallowed; the hub keeps running on
        in-memory state."""
        path = Path(self.config.state_path)
        try:
            fd, tmp = tempfile.mkstemp(
                dir=str(path.parent) if str(path.parent) else ".",
                prefix=path.name + ".",
            )
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(content)
                os.replace(tmp, path)
            except BaseException:
                os.unlink(tmp)
                raise
            return True
        except OSError as exc:
            logger.error("state persist failed, continuing in memory: %s", exc)
            return False

    def persist(self) -> bool:
        """Write the current state immediately (used at shutdown)."""
        with self.gate:
            state = self._state_lines()
        return self._write_state(state)
