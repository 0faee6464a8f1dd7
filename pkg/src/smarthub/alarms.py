"""Hazard event pipeline: latch the siren, send one email per debounced
event, release on manual command or timeout.

The siren latch is never blocked by mail trouble: the latch and siren
status are set under the registry gate first, the email is dispatched
after the gate is released, and transport failures are retried with
backoff and then dropped with a log line.
"""

from __future__ import annotations

import enum
import logging
import smtplib
from dataclasses import dataclass
from email.mime.text import MIMEText

from .automation import Command
from .devices import DeviceKind, Registry

logger = logging.getLogger(__name__)

ALERT_SUBJECT = "Smart Home Alert"

DEFAULT_AUTO_OFF = 300.0
DEFAULT_DEBOUNCE = 30.0

MAIL_ATTEMPTS = 3
MAIL_BACKOFF = (0.5, 1.0)


class EmptyLocation(ValueError):
    """Alarm events must name the room they fired in."""


class HazardKind(enum.Enum):
    FIRE = "Fire"
    SMOKE = "Smoke"
    GAS = "Gas"
    INTRUSION = "Intrusion"


@dataclass(frozen=True)
class AlarmEvent:
    kind: HazardKind
    location: str
    at: float


@dataclass(frozen=True)
class Email:
    to: tuple[str, ...]
    subject: str
    body: str


@dataclass
class SirenLatch:
    on: bool = False
    since: float = 0.0
    auto_off_after: float = DEFAULT_AUTO_OFF


class MailTransportFailure(Exception):
    pass


class CaptureTransport:
    """In-memory sink used by tests and the default configuration."""

    def __init__(self):
        self.sent: list[Email] = []

    def send(self, email: Email) -> None:
        self.sent.append(email)


class SmtpTransport:
    """Thin smtplib wrapper; failures surface as MailTransportFailure."""

    def __init__(self, host: str, port: int, sender: str):
        self.host = host
        self.port = port
        self.sender = sender

    def send(self, email: Email) -> None:
        msg = MIMEText(email.body)
        msg["From"] = self.sender
        msg["To"] = ", ".join(email.to)
        msg["Subject"] = email.subject
        try:
            with smtplib.SMTP(self.host, self.port) as server:
                server.sendmail(self.sender, list(email.to), msg.as_string())
        except (OSError, smtplib.SMTPException) as exc:
            raise MailTransportFailure(str(exc)) from exc


def compose_email(event: AlarmEvent, recipients: list[str]) -> Email:
    """Fixed subject, body "<Kind> Detected in the <Location>"."""
    if not event.location:
        raise EmptyLocation("alarm event with empty location")
    return Email(
        to=tuple(recipients),
        subject=ALERT_SUBJECT,
        body=f"{event.kind.value} Detected in the {event.location}",
    )


def maybe_auto_off(latch: SirenLatch, now: float) -> Command:
    """TurnOff once the latch has been on for auto_off_after seconds."""
    if latch.on and now - latch.since >= latch.auto_off_after:
        return Command.TURN_OFF
    return Command.HOLD


class AlarmEngine:
    """Reacts to AlarmEvents against one registry and one mail transport.

    gate is the hub's registry lock; sleep is injectable so retry backoff
    costs nothing under test.
    """

    def __init__(
        self,
        registry: Registry,
        clock,
        transport,
        recipients: list[str],
        gate,
        auto_off_after: float = DEFAULT_AUTO_OFF,
        debounce_window: float = DEFAULT_DEBOUNCE,
        sleep=None,
    ):
        self._registry = registry
        self._clock = clock
        self._transport = transport
        self._recipients = list(recipients)
        self._gate = gate
        self._debounce_window = debounce_window
        self._sleep = sleep if sleep is not None else clock.sleep
        self.latch = SirenLatch(auto_off_after=auto_off_after)
        self._last_emailed: dict[tuple[HazardKind, str], float] = {}

    def _siren(self):
        for dev in self._registry.devices:
            if dev.kind is DeviceKind.SIREN:
                return dev
        return None

    def on_event(self, event: AlarmEvent) -> None:
        """Latch the siren and dispatch at most one email per debounce
        window. The email goes out after the gate is released so slow mail
        never delays device responses."""
        email = compose_email(event, self._recipients)
        key = (event.kind, event.location)
        with self._gate:
            siren = self._siren()
            if siren is not None:
                siren.status = 1
            else:
                logger.warning("alarm event with no siren device registered")
            self.latch.on = True
            self.latch.since = event.at
            last = self._last_emailed.get(key)
            send = last is None or event.at - last >= self._debounce_window
            if send:
                self._last_emailed[key] = event.at
        if send:
            self._dispatch(email)

    def _dispatch(self, email: Email) -> None:
        for attempt in range(MAIL_ATTEMPTS):
            try:
                self._transport.send(email)
                return
            except MailTransportFailure as exc:
                logger.error(
                    "mail dispatch failed (attempt %d/%d): %s",
                    attempt + 1,
                    MAIL_ATTEMPTS,
                    exc,
                )
                if attempt + 1 < MAIL_ATTEMPTS:
                    self._sleep(MAIL_BACKOFF[min(attempt, len(MAIL_BACKOFF) - 1)])
        logger.error("mail dropped after %d attempts: %s", MAIL_ATTEMPTS, email.body)

    def manual_release(self) -> None:
        """Clear the latch and reset the debounce window. Idempotent.

        Wired into the registry as the siren-off hook, so a successful
        authenticated Siren Off command releases the latch in the same
        serialized turn."""
        self.latch.on = False
        self._last_emailed.clear()
        siren = self._siren()
        if siren is not None:
            siren.status = 0

    def check_auto_off(self) -> bool:
        """Apply the auto-off rule; returns True when the siren was
        released. Runs under the gate (called from the hub tick)."""
        if maybe_auto_off(self.latch, self._clock.now()) is Command.TURN_OFF:
            self.latch.on = False
            siren = self._siren()
            if siren is not None:
                siren.status = 0
            return True
        return False
