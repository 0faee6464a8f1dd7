"""Free-text phrase to command mapping: the stand-in for the voice path.

Keyword rules only, no NLP: an on/off word picks the action, a device
word (light, fan, plug, siren, heater, auto) picks the target, ordinals
choose between numbered devices ("light two" -> Light_2). "fan speed
<n>" maps to the FanSpeed target with the number as the action. Anything
else raises UnmappedPhrase so the caller can prompt the user to retry.
"""

from __future__ import annotations

import string

_ORDINALS = {
    "zero": 0, "0": 0,
    "one": 1, "first": 1, "1": 1,
    "two": 2, "second": 2, "2": 2,
    "three": 3, "third": 3, "3": 3,
}

_NUMBERED = {"light": "Light", "plug": "Plug"}
_SINGLETONS = {
    "fan": "Fan",
    "siren": "Siren",
    "heater": "Heater",
    "auto": "Auto",
    "automatic": "Auto",
}


class UnmappedPhrase(ValueError):
    """No command could be extracted from the phrase."""


def _tokens(phrase: str) -> list[str]:
    cleaned = phrase.lower().translate(
        str.maketrans({c: " " for c in string.punctuation})
    )
    return cleaned.split()


def map_phrase(phrase: str) -> tuple[str, str]:
    """Map a phrase to a (target, action) pair.

    >>> map_phrase("turn on light one")
    ('Light_1', 'On')
    >>> map_phrase("set the fan speed to 2")
    ('FanSpeed', '2')
    """
    tokens = _tokens(phrase)
    if not tokens:
        raise UnmappedPhrase("empty phrase")

    if "fan" in tokens and "speed" in tokens:
        numbers = [_ORDINALS[t] for t in tokens if t in _ORDINALS]
        if len(numbers) != 1:
            raise UnmappedPhrase(f"no single fan speed in {phrase!r}")
        return "FanSpeed", str(numbers[0])

    on = "on" in tokens
    off = "off" in tokens
    if on == off:
        raise UnmappedPhrase(f"need exactly one of on/off in {phrase!r}")
    action = "On" if on else "Off"

    for i, token in enumerate(tokens):
        if token in _NUMBERED:
            ordinal = next(
                (_ORDINALS[t] for t in tokens[i + 1 :] if t in _ORDINALS), 1
            )
            return f"{_NUMBERED[token]}_{ordinal}", action
        if token in _SINGLETONS:
            return _SINGLETONS[token], action
    raise UnmappedPhrase(f"no device named in {phrase!r}")
