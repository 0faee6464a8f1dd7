"""Trace parsing and deterministic replay through the hub."""

import pytest

from smarthub.alarms import CaptureTransport, HazardKind
from smarthub.clock import FakeClock
from smarthub.config import HubConfig
from smarthub.devices import UnknownTarget
from smarthub.hub import Hub
from smarthub.simulator import SensorSim, TraceParseError, parse_trace

HEADER = "at_s,target,value"


def make_sim(tmp_path, name="state.txt"):
    cfg = HubConfig()
    cfg.state_path = str(tmp_path / name)
    capture = CaptureTransport()
    hub = Hub.boot(config=cfg, clock=FakeClock(), mail_transport=capture)
    return SensorSim(hub), hub, capture


class TestParseTrace:
    def test_basic(self):
        entries = parse_trace(
            f"{HEADER}\n0,Temp_Living,18\n120,Temp_Living,25\n180,event:Fire,Kitchen\n"
        )
        assert len(entries) == 3
        assert entries[0].at == 0 and entries[0].value == "18"
        assert entries[2].is_event
        assert entries[2].target == "event:Fire"

    def test_comments_and_blank_lines_skipped(self):
        entries = parse_trace(
            f"# a demo trace\n{HEADER}\n\n0,Temp_Living,18\n# midpoint\n5,Temp_Living,19\n"
        )
        assert [e.value for e in entries] == ["18", "19"]

    def test_empty_returns_no_entries(self):
        assert parse_trace("") == []
        assert parse_trace("# only a comment\n") == []

    def test_malformed_line_number_reported(self):
        with pytest.raises(TraceParseError) as err:
            parse_trace(f"{HEADER}\nnot,enough\n")
        assert err.value.line == 2

    def test_bad_header(self):
        with pytest.raises(TraceParseError) as err:
            parse_trace("time,who,what\n0,Temp_Living,18\n")
        assert err.value.line == 1

    def test_decreasing_time_rejected(self):
        with pytest.raises(TraceParseError) as err:
            parse_trace(f"{HEADER}\n10,Temp_Living,18\n5,Temp_Living,19\n")
        assert err.value.line == 3

    def test_bad_reading_rejected(self):
        with pytest.raises(TraceParseError):
            parse_trace(f"{HEADER}\n0,Temp_Living,warm\n")

    def test_unknown_event_kind_rejected(self):
        with pytest.raises(TraceParseError):
            parse_trace(f"{HEADER}\n0,event:Flood,Basement\n")


class TestInjection:
    def test_reading_visible_in_snapshot(self, tmp_path):
        sim, hub, _ = make_sim(tmp_path)
        sim.inject_reading("Temp_Living", 19)
        assert ("Temp_Living", 19) in hub.registry.snapshot()
        assert ("Temp_Living", 69) in hub.registry.wire_snapshot()

    def test_reading_inside_dead_band_leaves_heater(self, tmp_path):
        sim, hub, _ = make_sim(tmp_path)
        hub.handle_command("$1234$Auto_On")
        sim.inject_reading("Temp_Living", 22)
        hub.tick()
        assert hub.registry.get("Heater").status == 0

    def test_unknown_sensor(self, tmp_path):
        sim, _, _ = make_sim(tmp_path)
        with pytest.raises(UnknownTarget):
            sim.inject_reading("Ghost", 1)

    def test_event_mails_and_latches(self, tmp_path):
        sim, hub, capture = make_sim(tmp_path)
        sim.trigger_event(HazardKind.INTRUSION, "Garage")
        assert hub.registry.get("Siren").status == 1
        assert [e.body for e in capture.sent] == ["Intrusion Detected in the Garage"]

    def test_event_empty_location(self, tmp_path):
        from smarthub.alarms import EmptyLocation

        sim, _, _ = make_sim(tmp_path)
        with pytest.raises(EmptyLocation):
            sim.trigger_event(HazardKind.FIRE, "")


class TestReplay:
    def write_trace(self, tmp_path, body):
        path = tmp_path / "trace.csv"
        path.write_text(f"{HEADER}\n{body}")
        return path

    def test_three_line_demo(self, tmp_path):
        """Cold room turns the heater on, hot room turns it off, the fire
        event leaves the siren latched at the end."""
        sim, hub, capture = make_sim(tmp_path)
        hub.handle_command("$1234$Auto_On")
        trace = self.write_trace(
            tmp_path, "0,Temp_Living,18\n120,Temp_Living,25\n180,event:Fire,Kitchen\n"
        )
        heater_states = []
        original_tick = hub.tick

        def spying_tick():
            actions = original_tick()
            heater_states.append(hub.registry.get("Heater").status)
            return actions

        hub.tick = spying_tick
        summary = sim.replay(trace, speed=float("inf"))
        assert summary.applied == 3 and summary.errors == 0
        assert heater_states == [1, 0, 0]  # on after 18C, off after 25C
        assert hub.registry.get("Siren").status == 1
        assert [e.body for e in capture.sent] == ["Fire Detected in the Kitchen"]

    def test_empty_trace(self, tmp_path):
        sim, _, _ = make_sim(tmp_path)
        path = tmp_path / "trace.csv"
        path.write_text("")
        summary = sim.replay(path)
        assert summary.applied == 0 and summary.errors == 0

    def test_malformed_line_aborts_with_line_number(self, tmp_path):
        sim, _, _ = make_sim(tmp_path)
        trace = self.write_trace(tmp_path, "0,Temp_Living,18\nbroken line\n")
        with pytest.raises(TraceParseError) as err:
            sim.replay(trace)
        assert err.value.line == 3

    def test_application_errors_counted_not_fatal(self, tmp_path):
        sim, hub, _ = make_sim(tmp_path)
        trace = self.write_trace(
            tmp_path, "0,Ghost,1\n1,Temp_Living,21\n2,Light_1,1\n"
        )
        summary = sim.replay(trace, speed=float("inf"))
        assert summary.applied == 1
        assert summary.errors == 2
        assert hub.registry.get("Temp_Living").status == 21

    def test_counts_match_data_lines(self, tmp_path):
        sim, _, _ = make_sim(tmp_path)
        body = "# comment\n0,Temp_Living,18\n# another\n5,Temp_Living,20\n"
        trace = self.write_trace(tmp_path, body)
        summary = sim.replay(trace, speed=float("inf"))
        data_lines = sum(
            1 for line in body.splitlines() if line and not line.startswith("#")
        )
        assert summary.applied + summary.errors == data_lines

    def test_fake_clock_advances_with_trace(self, tmp_path):
        sim, hub, _ = make_sim(tmp_path)
        start = hub.clock.now()
        trace = self.write_trace(
            tmp_path, "0,Temp_Living,18\n300,Temp_Living,19\n"
        )
        sim.replay(trace)
        assert hub.clock.now() - start == 300

    def test_replay_deterministic(self, tmp_path):
        body = (
            "0,Temp_Living,18\n60,event:Gas,Kitchen\n65,event:Gas,Kitchen\n"
            "120,Temp_Living,26\n200,event:Fire,Garage\n"
        )

        def run(name):
            sim, hub, capture = make_sim(tmp_path, name=name)
            hub.handle_command("$1234$Auto_On")
            trace = tmp_path / f"{name}.csv"
            trace.write_text(f"{HEADER}\n{body}")
            sim.replay(trace)
            return hub.registry.snapshot(), [e.body for e in capture.sent]

        first = run("a.txt")
        second = run("b.txt")
        assert first == second
        # Gas debounce collapsed the duplicate within 5 seconds.
        assert first[1].count("Gas Detected in the Kitchen") == 1
