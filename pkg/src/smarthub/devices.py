"""Virtual device registry: the one place device actions mutate state.

Each device carries an integer status word (0 = off, 1 = on for
switch-kind devices; plain degrees Celsius for temperature sensors).
Two pseudo-devices appear in every snapshot: ``FanSpeed`` (0..3) and
``Auto`` (automatic-mode gate, 0/1).

Temperature statuses are kept as plain Celsius internally; only the wire
snapshot applies the +50 offset that keeps response-packet statuses
non-negative (documented in the README protocol section).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

TEMP_WIRE_OFFSET = 50

FAN_SPEED_MIN, FAN_SPEED_MAX = 0, 3

# Targets with special dispatch; a registry may not register devices
# under these ids.
RESERVED_IDS = frozenset({"FanSpeed", "Auto", "Status", "ChangePass"})

_ID_FORBIDDEN = frozenset({" ", ":", "$", "="})


class DeviceKind(enum.Enum):
    SWITCH = "switch"
    FAN = "fan"
    SIREN = "siren"
    HEATER = "heater"
    TEMP_SENSOR = "temp_sensor"
    GAS_SENSOR = "gas_sensor"
    MOTION_SENSOR = "motion_sensor"

    @property
    def is_sensor(self) -> bool:
        return self in (
            DeviceKind.TEMP_SENSOR,
            DeviceKind.GAS_SENSOR,
            DeviceKind.MOTION_SENSOR,
        )


class DeviceError(Exception):
    """Base for action/target failures; the hub answers these with 404."""


class UnknownTarget(DeviceError):
    pass


class UnknownAction(DeviceError):
    pass


class SpeedOutOfRange(DeviceError):
    pass


class NotASensor(DeviceError):
    pass


class NotRepresentable(DeviceError):
    """Value cannot be carried in the non-negative status word."""


@dataclass
class DeviceState:
    """One controllable or sensed entity."""

    id: str
    kind: DeviceKind
    location: str
    status: int = 0


def default_roster() -> list[DeviceState]:
    """Built-in device roster covering every supported kind."""
    return [
        DeviceState("Light_1", DeviceKind.SWITCH, "Living Room"),
        DeviceState("Light_2", DeviceKind.SWITCH, "Bedroom"),
        DeviceState("Plug_1", DeviceKind.SWITCH, "Kitchen"),
        DeviceState("Fan", DeviceKind.FAN, "Living Room"),
        DeviceState("Heater", DeviceKind.HEATER, "Living Room"),
        DeviceState("Siren", DeviceKind.SIREN, "Hallway"),
        DeviceState("Temp_Living", DeviceKind.TEMP_SENSOR, "Living Room"),
        DeviceState("Gas_Kitchen", DeviceKind.GAS_SENSOR, "Kitchen"),
        DeviceState("Motion_Garage", DeviceKind.MOTION_SENSOR, "Garage"),
    ]


class Registry:
    """Ordered collection of devices plus the FanSpeed/Auto attributes.

    Registration order is fixed for the lifetime of the registry, so
    snapshots (and therefore response packets) are byte-reproducible.
    The registry itself is not thread-safe; the hub serializes every
    mutation through its gate.
    """

    def __init__(self, devices: list[DeviceState] | None = None):
        devices = default_roster() if devices is None else devices
        self._devices: dict[str, DeviceState] = {}
        for dev in devices:
            self._register(dev)
        self.fan_speed = 0
        self.auto_mode = False
        # Invoked after a successful manual Siren Off; the hub points this
        # at the alarm engine so the latch is released in the same turn.
        self.siren_release_hook = None

    def _register(self, dev: DeviceState) -> None:
        if not dev.id or any(c in _ID_FORBIDDEN for c in dev.id):
            raise ValueError(f"invalid device id: {dev.id!r}")
        if dev.id in RESERVED_IDS:
            raise ValueError(f"device id is reserved: {dev.id!r}")
        if dev.id in self._devices:
            raise ValueError(f"duplicate device id: {dev.id!r}")
        if dev.status < 0:
            raise ValueError(f"negative initial status: {dev.id!r}")
        self._devices[dev.id] = dev

    def get(self, device_id: str) -> DeviceState | None:
        return self._devices.get(device_id)

    @property
    def devices(self) -> list[DeviceState]:
        return list(self._devices.values())

    def apply_action(self, target: str, action: str) -> int:
        """Perform one parsed command against the registry.

        Returns the response code hint (always 200 on success). Raises a
        DeviceError subclass otherwise; errors never leave partial state
        behind because every write happens after validation.
        """
        if target == "Status":
            if action != "All":
                raise UnknownAction(f"Status supports only 'All', got {action!r}")
            return 200
        if target == "FanSpeed":
            try:
                speed = int(action)
            except ValueError:
                raise SpeedOutOfRange(f"fan speed not a number: {action!r}") from None
            if not FAN_SPEED_MIN <= speed <= FAN_SPEED_MAX:
                raise SpeedOutOfRange(f"fan speed out of 0..3: {speed}")
            self.fan_speed = speed
            return 200
        if target == "Auto":
            if action == "On":
                self.auto_mode = True
            elif action == "Off":
                self.auto_mode = False
            else:
                raise UnknownAction(f"Auto supports On/Off, got {action!r}")
            return 200

        dev = self._devices.get(target)
        if dev is None:
            raise UnknownTarget(f"no such device: {target!r}")
        if dev.kind.is_sensor:
            raise UnknownAction(f"{target} is a sensor, not an actuator")
        if action == "On":
            dev.status = 1
        elif action == "Off":
            dev.status = 0
            if dev.kind is DeviceKind.SIREN and self.siren_release_hook:
                self.siren_release_hook()
        else:
            raise UnknownAction(f"unsupported action {action!r} for {target}")
        return 200

    def set_sensor_value(self, sensor_id: str, value: int) -> None:
        """Inject a sensor reading; actuators are rejected."""
        dev = self._devices.get(sensor_id)
        if dev is None:
            raise UnknownTarget(f"no such device: {sensor_id!r}")
        if not dev.kind.is_sensor:
            raise NotASensor(f"{sensor_id} is an actuator")
        if value < 0:
            raise NotRepresentable(
                f"negative status {value} for {sensor_id} violates the "
                "non-negative status word"
            )
        dev.status = int(value)

    def snapshot(self) -> list[tuple[str, int]]:
        """(device_id, status) pairs in registration order, then the
        FanSpeed and Auto pseudo-devices. Statuses are internal values."""
        pairs = [(dev.id, dev.status) for dev in self._devices.values()]
        pairs.append(("FanSpeed", self.fan_speed))
        pairs.append(("Auto", int(self.auto_mode)))
        return pairs

    def wire_snapshot(self) -> list[tuple[str, int]]:
        """Snapshot with wire encoding applied: temperature statuses are
        offset by +50 so sub-zero readings stay non-negative on the wire."""
        pairs = []
        for dev in self._devices.values():
            status = dev.status
            if dev.kind is DeviceKind.TEMP_SENSOR:
                status += TEMP_WIRE_OFFSET
            pairs.append((dev.id, status))
        pairs.append(("FanSpeed", self.fan_speed))
        pairs.append(("Auto", int(self.auto_mode)))
        return pairs
