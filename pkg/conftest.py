import pytest

from config import Config
from core.universe import get_universe

# Needs a running service; run it directly with `python test_deployment.py`.
collect_ignore = ["test_deployment.py"]


@pytest.fixture
def u32():
    return get_universe(3, 2)


@pytest.fixture
def u43():
    return get_universe(4, 3)


@pytest.fixture
def single_process(monkeypatch):
    monkeypatch.setattr(Config, "THREADS", 1)
