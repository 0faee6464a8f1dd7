"""smarthub: a standalone smart-home hub with an authenticated text-packet
protocol over HTTP, virtual devices, automatic environment control,
sensor-triggered alarms with email notification, and client tooling."""

__version__ = "0.1.0"
