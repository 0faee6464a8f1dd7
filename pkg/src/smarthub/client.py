"""Headless hub client: issues command packets over HTTP, prints the
synchronized statuses, and drives the simulator for demos and scripts.

Exit codes are a stable contract: 0 for application code 200/201, 4 for
404 (authentication or rejected action), 2 for transport errors, 1 for
local errors such as an unmappable phrase.

    smarthub-ctl --server http://127.0.0.1:8032 --password 1234 status
    smarthub-ctl set Light_1 On
    smarthub-ctl say "turn on the fan"
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import urllib.error
import urllib.parse
import urllib.request

from .alarms import HazardKind
from .codec import (
    CommandPacket,
    InvalidField,
    MalformedPacket,
    ResponsePacket,
    parse_response,
    serialize_command,
)
from .phrases import UnmappedPhrase, map_phrase
from .simulator import EVENT_PREFIX, TraceParseError, parse_trace

EXIT_OK = 0
EXIT_LOCAL = 1
EXIT_TRANSPORT = 2
EXIT_DENIED = 4

DEFAULT_SERVER = "http://127.0.0.1:8032"


class TransportError(Exception):
    pass


class HubClient:
    def __init__(self, server: str, password: str, timeout: float = 10.0):
        self.server = server.rstrip("/")
        self.password = password
        self.timeout = timeout

    def _post(self, path: str, data: bytes, content_type: str) -> bytes:
        req = urllib.request.Request(
            self.server + path, data=data, headers={"Content-Type": content_type}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.read()
        except (urllib.error.URLError, OSError) as exc:
            raise TransportError(f"cannot reach hub at {self.server}: {exc}") from exc

    def send_command(self, target: str, action: str) -> ResponsePacket:
        """Serialize through the codec (never hand-built text) and POST."""
        raw = serialize_command(
            CommandPacket(auth=self.password, target=target, action=action)
        )
        body = self._post("/cmd", raw.encode("utf-8"), "text/plain")
        try:
            env = json.loads(body.decode("utf-8"))
            return parse_response(env["raw"])
        except (json.JSONDecodeError, KeyError, TypeError, MalformedPacket) as exc:
            raise TransportError(f"bad hub response: {exc}") from exc

    def sim_post(self, path: str, payload: dict) -> dict:
        payload = dict(payload, password=self.password)
        body = self._post(path, json.dumps(payload).encode("utf-8"), "application/json")
        try:
            result = json.loads(body.decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise TransportError(f"bad hub response: {exc}") from exc
        return result


def _render_statuses(pkt: ResponsePacket) -> str:
    if not pkt.statuses:
        return "(no statuses)"
    width = max(len(d) for d, _ in pkt.statuses)
    return "\n".join(f"{d:<{width}}  {s}" for d, s in pkt.statuses)


def _code_exit(code: int) -> int:
    return EXIT_OK if code in (200, 201) else EXIT_DENIED


def _cmd_status(client: HubClient, _args) -> int:
    pkt = client.send_command("Status", "All")
    if pkt.code != 200:
        print(f"authentication failed ({pkt.code})")
        return _code_exit(pkt.code)
    print(_render_statuses(pkt))
    return EXIT_OK


def _send_and_report(client: HubClient, target: str, action: str) -> int:
    pkt = client.send_command(target, action)
    if pkt.code == 200:
        print("ok (200)")
        print(_render_statuses(pkt))
    elif pkt.code == 201:
        print("password changed (201)")
    else:
        print("rejected (404)")
    return _code_exit(pkt.code)


def _cmd_set(client: HubClient, args) -> int:
    return _send_and_report(client, args.target, args.action)


def _cmd_passwd(client: HubClient, args) -> int:
    return _send_and_report(client, "ChangePass", args.new_password)


def _cmd_siren_off(client: HubClient, _args) -> int:
    return _send_and_report(client, "Siren", "Off")


def _cmd_auto(client: HubClient, args) -> int:
    return _send_and_report(client, "Auto", args.mode.capitalize())


def _cmd_say(client: HubClient, args) -> int:
    phrase = " ".join(args.phrase)
    try:
        target, action = map_phrase(phrase)
    except UnmappedPhrase:
        print("no command captured, try again")
        return EXIT_LOCAL
    print(f"-> {target}_{action}")
    return _send_and_report(client, target, action)


def _sim_result(result: dict) -> int:
    if result.get("ok"):
        print("ok")
        return EXIT_OK
    error = result.get("error") or "unknown error"
    print(f"rejected: {error}")
    return EXIT_DENIED if "authentication" in error else EXIT_LOCAL


def _cmd_inject_reading(client: HubClient, args) -> int:
    return _sim_result(
        client.sim_post("/sim/reading", {"sensor": args.sensor, "value": args.value})
    )


def _cmd_inject_event(client: HubClient, args) -> int:
    return _sim_result(
        client.sim_post("/sim/event", {"kind": args.kind, "location": args.location})
    )


def _cmd_replay(client: HubClient, args) -> int:
    try:
        entries = parse_trace(args.trace.read())
    except TraceParseError as exc:
        print(f"trace error: {exc}")
        return EXIT_LOCAL
    applied = errors = 0
    previous_at = 0.0
    for entry in entries:
        if args.speed > 0 and not math.isinf(args.speed):
            time.sleep((entry.at - previous_at) / args.speed)
        previous_at = entry.at
        if entry.is_event:
            result = client.sim_post(
                "/sim/event",
                {"kind": entry.target[len(EVENT_PREFIX):], "location": entry.value},
            )
        else:
            result = client.sim_post(
                "/sim/reading", {"sensor": entry.target, "value": int(entry.value)}
            )
        if result.get("ok"):
            applied += 1
        else:
            errors += 1
            print(f"  error at t={entry.at}: {result.get('error')}")
    print(f"replayed {applied} entries, {errors} errors")
    return EXIT_OK if errors == 0 else EXIT_LOCAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smarthub-ctl", description="Control a smarthub instance."
    )
    parser.add_argument("--server", default=DEFAULT_SERVER, help="hub base URL")
    parser.add_argument(
        "--password",
        default=os.environ.get("HUB_PASSWORD", "1234"),
        help="hub credential (or env HUB_PASSWORD)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("status", help="print all device statuses").set_defaults(
        run=_cmd_status
    )

    p = sub.add_parser("set", help="apply an action to a target")
    p.add_argument("target")
    p.add_argument("action")
    p.set_defaults(run=_cmd_set)

    p = sub.add_parser("passwd", help="change the hub password")
    p.add_argument("new_password")
    p.set_defaults(run=_cmd_passwd)

    sub.add_parser("siren-off", help="silence the siren").set_defaults(
        run=_cmd_siren_off
    )

    p = sub.add_parser("auto", help="toggle automatic mode")
    p.add_argument("mode", choices=["on", "off"])
    p.set_defaults(run=_cmd_auto)

    p = sub.add_parser("say", help="map a free-text phrase to a command")
    p.add_argument("phrase", nargs="+")
    p.set_defaults(run=_cmd_say)

    p = sub.add_parser("inject-reading", help="set a simulated sensor value")
    p.add_argument("sensor")
    p.add_argument("value", type=int)
    p.set_defaults(run=_cmd_inject_reading)

    p = sub.add_parser("inject-event", help="fire a simulated hazard event")
    p.add_argument("kind", choices=[k.value for k in HazardKind])
    p.add_argument("location")
    p.set_defaults(run=_cmd_inject_event)

    p = sub.add_parser("replay", help="replay a CSV trace against the hub")
    p.add_argument("trace", type=argparse.FileType("r"))
    p.add_argument("--speed", type=float, default=1.0, help="time multiplier")
    p.set_defaults(run=_cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = HubClient(args.server, args.password)
    try:
        return args.run(client, args)
    except TransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except InvalidField as exc:
        print(f"invalid packet field: {exc}", file=sys.stderr)
        return EXIT_LOCAL


if __name__ == "__main__":
    raise SystemExit(main())
