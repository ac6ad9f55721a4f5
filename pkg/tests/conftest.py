import numpy as np
import pytest

from cyclewalk.verify import random_coin, random_density

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20031)


@pytest.fixture
def make_density():
    return random_density


@pytest.fixture
def make_coin():
    return random_coin


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
