import pytest

from smarthub.alarms import CaptureTransport
from smarthub.clock import FakeClock
from smarthub.config import HubConfig
from smarthub.hub import Hub


@pytest.fixture
def fake_clock():
    return FakeClock()


@pytest.fixture
def capture():
    return CaptureTransport()


@pytest.fixture
def state_path(tmp_path):
    return str(tmp_path / "hub_state.txt")


@pytest.fixture
def hub_config(state_path):
    cfg = HubConfig()
    cfg.state_path = state_path
    return cfg


@pytest.fixture
def hub(hub_config, fake_clock, capture):
    """Fresh hub on the default roster, fake clock, capture mail."""
    return Hub.boot(config=hub_config, clock=fake_clock, mail_transport=capture)
