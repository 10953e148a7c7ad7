import math

import pytest

from config import set_settings
from core.standard_subspace import RealSubspace, thermal_pair


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from defaults, untouched by MODULAR_* variables"""
    import os

    for key in list(os.environ):
        if key.startswith("MODULAR_"):
            monkeypatch.delenv(key)
    set_settings(None)
    yield
    set_settings(None)


@pytest.fixture
def theta() -> float:
    return 1.0


@pytest.fixture
def pair(theta) -> RealSubspace:
    return thermal_pair(theta)


@pytest.fixture
def pair_descriptor(theta) -> dict:
    c = math.exp(-theta / 2.0)
    return {"ambient_dim": 2, "span": [[[c, 0.0], [1.0, 0.0]], [[0.0, -c], [0.0, 1.0]]]}
