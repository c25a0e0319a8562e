import pytest

from oracles import LOTTERY_PATH


@pytest.fixture(scope="session")
def lottery_source():
    return LOTTERY_PATH.read_text(encoding="utf-8")
