"""Alarm pipeline: latch, email composition, debounce, auto-off."""

import logging
import threading

import pytest

from smarthub.alarms import (
    ALERT_SUBJECT,
    AlarmEngine,
    AlarmEvent,
    CaptureTransport,
    Email,
    EmptyLocation,
    HazardKind,
    MailTransportFailure,
    SirenLatch,
    compose_email,
    maybe_auto_off,
)
from smarthub.automation import Command
from smarthub.clock import FakeClock
from smarthub.devices import Registry

import oracles

RECIPIENTS = ["owner@example.com", "family@example.com"]


def make_engine(transport=None, debounce=30.0, auto_off=300.0):
    clock = FakeClock()
    registry = Registry()
    engine = AlarmEngine(
        registry,
        clock,
        transport if transport is not None else CaptureTransport(),
        RECIPIENTS,
        threading.RLock(),
        auto_off_after=auto_off,
        debounce_window=debounce,
        sleep=lambda _s: None,
    )
    return engine, registry, clock


def fire(engine, clock, kind=HazardKind.FIRE, location="Kitchen"):
    engine.on_event(AlarmEvent(kind=kind, location=location, at=clock.now()))


class TestComposeEmail:
    def test_fire_kitchen(self):
        email = compose_email(
            AlarmEvent(HazardKind.FIRE, "Kitchen", 0.0), RECIPIENTS
        )
        assert email.subject == "Smart Home Alert"
        assert email.body == "Fire Detected in the Kitchen"
        assert email.to == tuple(RECIPIENTS)

    @pytest.mark.parametrize("kind", list(HazardKind))
    @pytest.mark.parametrize("location", ["Kitchen", "Garage", "Living Room"])
    def test_template_matches_oracle(self, kind, location):
        email = compose_email(AlarmEvent(kind, location, 0.0), RECIPIENTS)
        assert email.body == oracles.expected_alert_body(kind.value, location)

    def test_empty_location_rejected(self):
        with pytest.raises(EmptyLocation):
            compose_email(AlarmEvent(HazardKind.SMOKE, "", 0.0), RECIPIENTS)


class TestOnEvent:
    def test_siren_latches_and_one_email(self):
        engine, registry, clock = make_engine()
        fire(engine, clock)
        assert registry.get("Siren").status == 1
        assert engine.latch.on
        sent = engine._transport.sent
        assert len(sent) == 1
        assert sent[0].subject == ALERT_SUBJECT
        assert sent[0].body == "Fire Detected in the Kitchen"

    def test_intrusion_garage_body(self):
        engine, registry, clock = make_engine()
        fire(engine, clock, HazardKind.INTRUSION, "Garage")
        assert engine._transport.sent[0].body == "Intrusion Detected in the Garage"

    def test_duplicate_within_debounce_sends_one_email(self):
        engine, registry, clock = make_engine()
        fire(engine, clock)
        clock.advance(5)
        fire(engine, clock)
        assert len(engine._transport.sent) == 1
        assert registry.get("Siren").status == 1

    def test_distinct_events_each_send(self):
        engine, registry, clock = make_engine()
        fire(engine, clock, HazardKind.FIRE, "Kitchen")
        fire(engine, clock, HazardKind.GAS, "Kitchen")
        fire(engine, clock, HazardKind.FIRE, "Garage")
        assert len(engine._transport.sent) == 3

    def test_debounce_sequence_matches_oracle(self):
        engine, registry, clock = make_engine(debounce=30.0)
        script = [
            (0, "Fire", "Kitchen"),
            (5, "Fire", "Kitchen"),
            (29, "Fire", "Kitchen"),
            (30, "Fire", "Kitchen"),
            (31, "Gas", "Kitchen"),
            (40, "RESET", ""),
            (41, "Fire", "Kitchen"),
            (50, "Fire", "Kitchen"),
        ]
        expected = oracles.predict_emailed_events(
            [(t, k, l) for t, k, l in script], 30.0
        )
        elapsed = 0
        for t, kind, location in script:
            clock.advance(t - elapsed)
            elapsed = t
            if kind == "RESET":
                engine.manual_release()
            else:
                fire(engine, clock, HazardKind(kind), location)
        got = [email.body for email in engine._transport.sent]
        assert got == [
            oracles.expected_alert_body(k, l) for _, k, l in expected
        ]

    def test_empty_location_changes_nothing(self):
        engine, registry, clock = make_engine()
        with pytest.raises(EmptyLocation):
            fire(engine, clock, HazardKind.FIRE, "")
        assert registry.get("Siren").status == 0
        assert not engine.latch.on
        assert engine._transport.sent == []


class FailingTransport:
    def __init__(self):
        self.attempts = 0

    def send(self, email):
        self.attempts += 1
        raise MailTransportFailure("transport down")


class TestMailIsolation:
    def test_failure_retries_three_times(self, caplog):
        transport = FailingTransport()
        engine, registry, clock = make_engine(transport=transport)
        with caplog.at_level(logging.ERROR):
            fire(engine, clock)
        assert transport.attempts == 3
        assert "dropped" in caplog.text

    def test_siren_unaffected_by_mail_failure(self):
        transport = FailingTransport()
        engine, registry, clock = make_engine(transport=transport)
        fire(engine, clock)
        assert registry.get("Siren").status == 1
        assert engine.latch.on
        # Behavior identical to the capture-transport run.
        other, other_registry, other_clock = make_engine()
        fire(other, other_clock)
        assert registry.snapshot() == other_registry.snapshot()


class TestAutoOff:
    def test_boundary_minus_one_holds(self):
        latch = SirenLatch(on=True, since=0.0, auto_off_after=300.0)
        assert maybe_auto_off(latch, 299.0) is Command.HOLD

    def test_boundary_turns_off(self):
        latch = SirenLatch(on=True, since=0.0, auto_off_after=300.0)
        assert maybe_auto_off(latch, 300.0) is Command.TURN_OFF

    def test_off_latch_holds(self):
        latch = SirenLatch(on=False, since=0.0, auto_off_after=300.0)
        assert maybe_auto_off(latch, 10_000.0) is Command.HOLD

    def test_no_phantom_re_off_after_manual_release(self):
        engine, registry, clock = make_engine()
        fire(engine, clock)
        clock.advance(10)
        engine.manual_release()
        assert registry.get("Siren").status == 0
        released_at = clock.now()
        for _ in range(600):
            clock.advance(1)
            assert engine.check_auto_off() is False
            assert registry.get("Siren").status == 0
        assert clock.now() - released_at == 600

    def test_auto_off_fires_exactly_at_configured_elapse(self):
        engine, registry, clock = make_engine(auto_off=300.0)
        fire(engine, clock)
        for second in range(1, 300):
            clock.advance(1)
            assert engine.check_auto_off() is False, second
            assert registry.get("Siren").status == 1
        clock.advance(1)  # t = 300
        assert engine.check_auto_off() is True
        assert registry.get("Siren").status == 0


class TestManualRelease:
    def test_release_clears(self):
        engine, registry, clock = make_engine()
        fire(engine, clock)
        engine.manual_release()
        assert not engine.latch.on
        assert ("Siren", 0) in registry.snapshot()

    def test_idempotent(self):
        engine, registry, clock = make_engine()
        engine.manual_release()
        engine.manual_release()
        assert not engine.latch.on
        assert registry.get("Siren").status == 0

    def test_release_then_new_event_relatches_and_emails(self):
        engine, registry, clock = make_engine()
        fire(engine, clock)
        clock.advance(2)
        engine.manual_release()
        clock.advance(2)  # still inside what would be the debounce window
        fire(engine, clock)
        assert engine.latch.on
        assert registry.get("Siren").status == 1
        assert len(engine._transport.sent) == 2

    def test_latch_monotonic_between_event_and_release(self):
        engine, registry, clock = make_engine()
        fire(engine, clock)
        for _ in range(100):
            clock.advance(1)
            engine.check_auto_off()
            assert ("Siren", 1) in registry.snapshot()
        engine.manual_release()
        assert ("Siren", 0) in registry.snapshot()


def test_email_is_frozen_value():
    email = Email(to=("a@b",), subject="s", body="b")
    with pytest.raises(AttributeError):
        email.body = "other"
