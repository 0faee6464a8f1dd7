"""Loopback HTTP tests: endpoints, envelope, GET/POST equivalence."""

import json
import threading
import urllib.error
import urllib.parse
import urllib.request

import pytest

from smarthub.codec import parse_response
from smarthub.server import make_server


@pytest.fixture
def http_hub(hub):
    server = make_server(hub, host="127.0.0.1", port=0)
    thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.05), daemon=True
    )
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    yield hub, base
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def post(base, path, data: bytes, content_type="text/plain"):
    req = urllib.request.Request(
        base + path, data=data, headers={"Content-Type": content_type}
    )
    with urllib.request.urlopen(req, timeout=5) as resp:
        return resp.status, resp.read()


def get(base, path):
    with urllib.request.urlopen(base + path, timeout=5) as resp:
        return resp.status, resp.read()


def post_cmd(base, packet: str):
    return post(base, "/cmd", packet.encode())


def get_cmd(base, packet: str):
    return get(base, "/cmd?packet=" + urllib.parse.quote(packet, safe=""))


class TestCmdEndpoint:
    def test_post_success_envelope(self, http_hub):
        hub, base = http_hub
        status, body = post_cmd(base, "$1234$Light_1_On")
        assert status == 200  # transport status is always 200
        env = json.loads(body)
        assert env["code"] == 200
        assert {"device": "Light_1", "status": 1} in env["statuses"]
        raw = parse_response(env["raw"])
        assert raw.code == 200
        assert ("Light_1", 1) in raw.statuses

    def test_wrong_password_envelope(self, http_hub):
        _, base = http_hub
        status, body = post_cmd(base, "$9999$Light_1_On")
        assert status == 200
        env = json.loads(body)
        assert env == {"code": 404, "statuses": [], "raw": "404"}

    def test_get_equals_post_byte_identical(self, http_hub):
        _, base = http_hub
        for packet in ["$1234$Status_All", "$1234$Light_1_On", "$9999$Fan_On",
                       "not a packet", "$1234$Ghost_On"]:
            _, get_body = get_cmd(base, packet)
            _, post_body = post_cmd(base, packet)
            assert get_body == post_body, packet

    def test_get_missing_param_is_malformed(self, http_hub):
        _, base = http_hub
        _, body = get(base, "/cmd")
        assert json.loads(body)["code"] == 404

    def test_envelope_raw_is_normative_packet_text(self, http_hub):
        hub, base = http_hub
        _, body = post_cmd(base, "$1234$Status_All")
        env = json.loads(body)
        expected_pairs = hub.registry.wire_snapshot()
        assert parse_response(env["raw"]).statuses == tuple(expected_pairs)

    def test_invalid_utf8_body_rejected_cleanly(self, http_hub):
        _, base = http_hub
        status, body = post(base, "/cmd", b"\xff\xfe$1234$Fan_On")
        assert status == 200
        assert json.loads(body)["code"] == 404


class TestHealthz:
    def test_ok(self, http_hub):
        _, base = http_hub
        status, body = get(base, "/healthz")
        assert status == 200
        assert body == b"ok"


class TestSimEndpoints:
    def test_reading_roundtrip(self, http_hub):
        hub, base = http_hub
        payload = {"sensor": "Temp_Living", "value": 19, "password": "1234"}
        _, body = post(
            base, "/sim/reading", json.dumps(payload).encode(), "application/json"
        )
        assert json.loads(body) == {"ok": True, "error": None}
        assert hub.registry.get("Temp_Living").status == 19
        # The wire view carries the +50 offset.
        _, cmd_body = post_cmd(base, "$1234$Status_All")
        env = json.loads(cmd_body)
        assert {"device": "Temp_Living", "status": 69} in env["statuses"]

    def test_reading_requires_password(self, http_hub):
        hub, base = http_hub
        payload = {"sensor": "Temp_Living", "value": 19, "password": "wrong"}
        _, body = post(
            base, "/sim/reading", json.dumps(payload).encode(), "application/json"
        )
        result = json.loads(body)
        assert result["ok"] is False
        assert "authentication" in result["error"]
        assert hub.registry.get("Temp_Living").status == 0

    def test_event_latches_siren_and_mails(self, http_hub, capture):
        hub, base = http_hub
        payload = {"kind": "Fire", "location": "Kitchen", "password": "1234"}
        _, body = post(
            base, "/sim/event", json.dumps(payload).encode(), "application/json"
        )
        assert json.loads(body)["ok"] is True
        assert hub.registry.get("Siren").status == 1
        assert [e.body for e in capture.sent] == ["Fire Detected in the Kitchen"]

    def test_event_unknown_kind_rejected(self, http_hub):
        _, base = http_hub
        payload = {"kind": "Flood", "location": "Basement", "password": "1234"}
        _, body = post(
            base, "/sim/event", json.dumps(payload).encode(), "application/json"
        )
        assert json.loads(body)["ok"] is False

    def test_bad_json_rejected(self, http_hub):
        _, base = http_hub
        _, body = post(base, "/sim/reading", b"{not json", "application/json")
        result = json.loads(body)
        assert result["ok"] is False
        assert "JSON" in result["error"]

    def test_unknown_sensor_reports_error(self, http_hub):
        _, base = http_hub
        payload = {"sensor": "Ghost", "value": 1, "password": "1234"}
        _, body = post(
            base, "/sim/reading", json.dumps(payload).encode(), "application/json"
        )
        assert json.loads(body)["ok"] is False


class TestPanel:
    def test_no_panel_configured_404(self, http_hub):
        _, base = http_hub
        with pytest.raises(urllib.error.HTTPError) as err:
            get(base, "/")
        assert err.value.code == 404

    def test_panel_served_when_configured(self, hub, tmp_path):
        panel = tmp_path / "panel"
        panel.mkdir()
        (panel / "index.html").write_text("<html>panel</html>")
        (panel / "app.js").write_text("console.log('hi')")
        hub.config.panel_dir = str(panel)
        server = make_server(hub, host="127.0.0.1", port=0)
        thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.05), daemon=True
    )
        thread.start()
        base = f"http://127.0.0.1:{server.server_address[1]}"
        try:
            status, body = get(base, "/")
            assert status == 200 and b"panel" in body
            status, body = get(base, "/app.js")
            assert status == 200 and b"console" in body
            with pytest.raises(urllib.error.HTTPError):
                get(base, "/../secret")
        finally:
            server.shutdown()
            server.server_close()
            thread.join(timeout=5)
