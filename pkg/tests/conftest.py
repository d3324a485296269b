from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "ucr"
NEUTRALITY_DATASETS = ("GunPoint", "ArrowHead", "ItalyPowerDemand")
VARIABLE_LENGTH_DATASET = "PickupGestureWiimoteZ"


def real_series(max_len=8, min_len=1):
    return st.lists(
        st.floats(-100, 100, allow_nan=False, allow_infinity=False, width=64),
        min_size=min_len,
        max_size=max_len,
    ).map(lambda v: np.array(v, dtype=np.float64))


def int_series(max_len=8, min_len=1):
    return st.lists(st.integers(-9, 9), min_size=min_len, max_size=max_len).map(
        lambda v: np.array(v, dtype=np.float64)
    )


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
