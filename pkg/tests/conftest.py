import pytest

from blindcast import ScheduleSeed
from blindcast.cli import DEFAULT_SEED_HEX


@pytest.fixture(scope="session")
def seed():
    return ScheduleSeed.from_hex(DEFAULT_SEED_HEX)


@pytest.fixture(scope="session")
def alt_seed():
    return ScheduleSeed.from_hex("00" * 31 + "01")
