"""HTTP front of the hub: the micro web-server.

Endpoints:

* ``POST /cmd`` with the raw command packet as a text/plain body, or
  ``GET /cmd?packet=<urlencoded packet>`` -- both answer the same JSON
  envelope ``{"code": int, "statuses": [{"device", "status"}], "raw":
  "<response packet text>"}``. The transport-level HTTP status is always
  200; 200/201/404 are application codes carried in the body, and ``raw``
  is the normative packet text.
* ``GET /healthz`` -> ``ok``.
* ``POST /sim/reading`` body ``{"sensor", "value", "password"}`` and
  ``POST /sim/event`` body ``{"kind", "location", "password"}`` -- the
  simulator's admin surface, guarded by the hub credential.
* ``GET /`` serves the control panel assets when ``panel_dir`` is
  configured.

Run with ``smarthub-hub --config hub.json [--state path]``.
"""

from __future__ import annotations

import argparse
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .alarms import EmptyLocation, HazardKind
from .codec import ResponsePacket, serialize_response
from .config import HubConfig
from .devices import DeviceError
from .hub import CorruptStateFile, Hub
from .simulator import SensorSim

logger = logging.getLogger(__name__)

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript",
    ".css": "text/css",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def envelope(pkt: ResponsePacket) -> bytes:
    """JSON body for a response packet; raw carries the exact wire text."""
    return json.dumps(
        {
            "code": pkt.code,
            "statuses": [{"device": d, "status": s} for d, s in pkt.statuses],
            "raw": serialize_response(pkt),
        }
    ).encode("utf-8")


class HubRequestHandler(BaseHTTPRequestHandler):
    """Dispatches HTTP requests to one hub instance (see make_server)."""

    hub: Hub
    sim: SensorSim
    panel_dir: Path | None = None

    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # route through logging, not stderr
        logger.debug("%s %s", self.address_string(), fmt % args)

    # -- helpers -------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    def _send_json(self, payload: dict) -> None:
        self._send(200, json.dumps(payload).encode("utf-8"), "application/json")

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    def _handle_packet(self, raw: str) -> None:
        pkt = self.hub.handle_command(raw)
        self._send(200, envelope(pkt), "application/json")

    # -- GET -----------------------------------------------------------

    def do_GET(self):
        url = urlsplit(self.path)
        if url.path == "/cmd":
            params = parse_qs(url.query)
            raw = params.get("packet", [""])[0]
            self._handle_packet(raw)
        elif url.path == "/healthz":
            self._send(200, b"ok", "text/plain")
        else:
            self._serve_panel(url.path)

    def do_HEAD(self):
        self.do_GET()

    def _serve_panel(self, path: str) -> None:
        if self.panel_dir is None:
            self._send(404, b"no control panel installed\n", "text/plain")
            return
        name = path.lstrip("/") or "index.html"
        target = (self.panel_dir / name).resolve()
        if not str(target).startswith(str(self.panel_dir.resolve())) or not target.is_file():
            self._send(404, b"not found\n", "text/plain")
            return
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), ctype)

    # -- POST ----------------------------------------------------------

    def do_POST(self):
        url = urlsplit(self.path)
        if url.path == "/cmd":
            raw = self._read_body().decode("utf-8", errors="replace")
            self._handle_packet(raw)
        elif url.path == "/sim/reading":
            self._sim_request(self._do_reading)
        elif url.path == "/sim/event":
            self._sim_request(self._do_event)
        else:
            self._send(404, b"not found\n", "text/plain")

    def _sim_request(self, apply) -> None:
        try:
            body = json.loads(self._read_body().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send_json({"ok": False, "error": "invalid JSON body"})
            return
        if not isinstance(body, dict):
            self._send_json({"ok": False, "error": "body must be a JSON object"})
            return
        if body.get("password") != self.hub.password:
            self._send_json({"ok": False, "error": "authentication failed"})
            return
        try:
            apply(body)
        except (DeviceError, EmptyLocation, KeyError, TypeError, ValueError) as exc:
            self._send_json({"ok": False, "error": str(exc) or repr(exc)})
            return
        self._send_json({"ok": True, "error": None})

    def _do_reading(self, body: dict) -> None:
        self.sim.inject_reading(str(body["sensor"]), int(round(float(body["value"]))))

    def _do_event(self, body: dict) -> None:
        self.sim.trigger_event(HazardKind(str(body["kind"])), str(body["location"]))


def make_server(hub: Hub, host: str | None = None, port: int | None = None):
    """Bind a ThreadingHTTPServer for the hub; port 0 picks a free port."""
    handler = type(
        "BoundHubHandler",
        (HubRequestHandler,),
        {
            "hub": hub,
            "sim": SensorSim(hub),
            "panel_dir": Path(hub.config.panel_dir) if hub.config.panel_dir else None,
        },
    )
    host = hub.config.listen_host if host is None else host
    port = hub.config.listen_port if port is None else port
    return ThreadingHTTPServer((host, port), handler)


class Ticker(threading.Thread):
    """Background loop driving hub.tick() every tick period."""

    def __init__(self, hub: Hub, period: float):
        super().__init__(name="hub-ticker", daemon=True)
        self._hub = hub
        self._period = period
        self._stop = threading.Event()

    def run(self):
        while not self._stop.wait(self._period):
            try:
                self._hub.tick()
            except Exception:
                logger.exception("tick failed")

    def stop(self):
        self._stop.set()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="smarthub-hub", description="Run the smart-home hub server."
    )
    parser.add_argument("--config", help="path to the hub configuration file")
    parser.add_argument("--state", help="override the persistence file path")
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    config = HubConfig.load(args.config) if args.config else HubConfig()
    try:
        hub = Hub.boot(config=config, state_path=args.state)
    except CorruptStateFile as exc:
        logger.error("refusing to start: %s", exc)
        return 1

    server = make_server(hub)
    ticker = Ticker(hub, config.tick_period_s)
    ticker.start()
    host, port = server.server_address[:2]
    logger.info("hub listening on http://%s:%s/ (password-protected)", host, port)
    try:
        # Idle until clients arrive; serve_forever blocks between requests.
        server.serve_forever()
    except KeyboardInterrupt:
        logger.info("shutting down")
    finally:
        ticker.stop()
        server.server_close()
        hub.persist()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
