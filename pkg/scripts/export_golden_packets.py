#!/usr/bin/env python3
"""Export the golden packet corpus consumed by the control-panel tests.

The corpus is generated by the Python codec (the authority on the wire
grammar) and committed at frontend/tests/golden_packets.json; a pytest
guard keeps the committed file in sync with the codec.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from smarthub.codec import CommandPacket, ResponsePacket, serialize_command, serialize_response

import oracles

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "golden_packets.json"


def build_corpus() -> dict:
    rng = random.Random(2025)
    commands = [
        CommandPacket("1234", "Fan", "On"),
        CommandPacket("1234", "FanSpeed", "2"),
        CommandPacket("1234", "Light_1", "On"),
        CommandPacket("1234", "Status", "All"),
        CommandPacket("1234", "ChangePass", "9876"),
        CommandPacket("9876", "Siren", "Off"),
        CommandPacket("1234", "Auto", "On"),
    ]
    for _ in range(60):
        commands.append(CommandPacket(*oracles.random_command_fields(rng)))

    responses = [
        ResponsePacket(200, (("Light_1", 1),)),
        ResponsePacket(404, ()),
        ResponsePacket(201, ()),
        ResponsePacket(200, (("Light_1", 1), ("Fan", 1), ("FanSpeed", 2), ("Temp", 23))),
    ]
    for _ in range(60):
        code, statuses = oracles.random_response_fields(rng)
        responses.append(ResponsePacket(code, tuple(statuses)))

    return {
        "commands": [
            {
                "raw": serialize_command(pkt),
                "auth": pkt.auth,
                "target": pkt.target,
                "action": pkt.action,
            }
            for pkt in commands
        ],
        "responses": [
            {
                "raw": serialize_response(pkt),
                "code": pkt.code,
                "statuses": [[device, status] for device, status in pkt.statuses],
            }
            for pkt in responses
        ],
        "malformed_responses": [
            "",
            "abc",
            "500",
            "200 Light_1",
            "200 Light_1:x",
            "200 Light_1:-1",
            "200  Light_1:1",
            "200 Light_1:1 Light_1:0",
        ],
    }


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_OUT
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(build_corpus(), indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
