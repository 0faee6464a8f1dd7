"""Command/response packet codec for the hub wire protocol.

Command packet (client -> hub):

    $<auth>$<target>_<action>

The credential attempt sits between the two ``$`` delimiters; the rest
splits at the LAST underscore, so target tokens such as ``Light_1`` work
while action tokens may never contain ``_``. Examples: ``$1234$Fan_On``,
``$1234$FanSpeed_2``.

Response packet (hub -> client):

    <code> <device>:<status> <device>:<status> ...

Code is one of 200, 201, 404. Pairs are space separated, device and
status colon separated, statuses are non-negative integers (0 = off,
1 = on for switch-kind devices). A code with no pairs is valid: ``404``.

All functions are pure; parsing is total (any input string yields either
a packet or MalformedPacket, never an unhandled exception).
"""

from __future__ import annotations

from dataclasses import dataclass, field

RESPONSE_CODES = (200, 201, 404)

# Fields are printable ASCII excluding '$' and space; actions additionally
# exclude '_' so the last-underscore split is unambiguous.
_FIELD_OK = frozenset(chr(c) for c in range(0x21, 0x7F)) - {"$"}
_ACTION_OK = _FIELD_OK - {"_"}


class MalformedPacket(ValueError):
    """Input text does not match the packet grammar."""


class InvalidField(ValueError):
    """Packet field violates the grammar; caller built a bad packet."""


@dataclass(frozen=True)
class CommandPacket:
    """Parsed ``$auth$target_action`` request."""

    auth: str
    target: str
    action: str


@dataclass(frozen=True)
class ResponsePacket:
    """Application response code plus ordered (device, status) pairs."""

    code: int
    statuses: tuple[tuple[str, int], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        # Normalize so list-of-lists input compares equal after a round trip.
        object.__setattr__(
            self, "statuses", tuple((str(d), int(s)) for d, s in self.statuses)
        )


def _field_ok(text: str, allowed: frozenset[str]) -> bool:
    return bool(text) and all(c in allowed for c in text)


def parse_command(raw: str) -> CommandPacket:
    """Parse command packet text.

    Raises MalformedPacket on any deviation from the grammar: missing
    ``$`` delimiters, empty auth, no underscore after the second ``$``,
    empty target or action, or characters outside the field alphabet.
    """
    if not raw.startswith("$"):
        raise MalformedPacket(f"command must start with '$': {raw!r}")
    end = raw.find("$", 1)
    if end == -1:
        raise MalformedPacket(f"missing second '$' delimiter: {raw!r}")
    auth = raw[1:end]
    rest = raw[end + 1 :]
    if not _field_ok(auth, _FIELD_OK):
        raise MalformedPacket(f"bad auth field: {raw!r}")
    split = rest.rfind("_")
    if split == -1:
        raise MalformedPacket(f"no '_' between target and action: {raw!r}")
    target, action = rest[:split], rest[split + 1 :]
    if not _field_ok(target, _FIELD_OK):
        raise MalformedPacket(f"bad target field: {raw!r}")
    if not _field_ok(action, _ACTION_OK):
        raise MalformedPacket(f"bad action field: {raw!r}")
    return CommandPacket(auth=auth, target=target, action=action)


def serialize_command(pkt: CommandPacket) -> str:
    """Render a CommandPacket as wire text, validating every field."""
    if not _field_ok(pkt.auth, _FIELD_OK):
        raise InvalidField(f"auth: {pkt.auth!r}")
    if not _field_ok(pkt.target, _FIELD_OK):
        raise InvalidField(f"target: {pkt.target!r}")
    if not _field_ok(pkt.action, _ACTION_OK):
        raise InvalidField(f"action: {pkt.action!r}")
    return f"${pkt.auth}${pkt.target}_{pkt.action}"


def parse_response(raw: str) -> ResponsePacket:
    """Parse response packet text.

    The first space-delimited token is the code; each remaining token is
    ``device:status``. Order is preserved. Unknown codes, non-integer
    statuses, negative statuses and duplicate device ids are rejected.
    """
    tokens = raw.split(" ")
    if not tokens or not tokens[0]:
        raise MalformedPacket(f"empty response packet: {raw!r}")
    if not tokens[0].isascii() or not tokens[0].isdigit():
        raise MalformedPacket(f"non-numeric response code: {raw!r}")
    code = int(tokens[0])
    if code not in RESPONSE_CODES:
        raise MalformedPacket(f"unknown response code {code}")
    statuses: list[tuple[str, int]] = []
    seen: set[str] = set()
    for token in tokens[1:]:
        device, colon, status_text = token.partition(":")
        if not colon or not device or ":" in status_text:
            raise MalformedPacket(f"bad device:status token: {token!r}")
        if not status_text.isascii() or not status_text.isdigit():
            raise MalformedPacket(f"non-integer status: {token!r}")
        if device in seen:
            raise MalformedPacket(f"duplicate device id: {device!r}")
        seen.add(device)
        statuses.append((device, int(status_text)))
    return ResponsePacket(code=code, statuses=tuple(statuses))


def serialize_response(pkt: ResponsePacket) -> str:
    """Render a ResponsePacket as wire text; no trailing space."""
    if pkt.code not in RESPONSE_CODES:
        raise InvalidField(f"code: {pkt.code!r}")
    parts = [str(pkt.code)]
    seen: set[str] = set()
    for device, status in pkt.statuses:
        if not device or " " in device or ":" in device:
            raise InvalidField(f"device id: {device!r}")
        if device in seen:
            raise InvalidField(f"duplicate device id: {device!r}")
        if status < 0:
            raise InvalidField(f"negative status for {device}: {status}")
        seen.add(device)
        parts.append(f"{device}:{status}")
    return " ".join(parts)
