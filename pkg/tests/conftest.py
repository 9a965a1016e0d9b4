import numpy as np
import pytest

from qps.operators import random_density, random_pure_state

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def states(n, count, seed=0):
    return [random_density(n, seed * 1000 + i) for i in range(count)]


def pure_states(n, count, seed=0):
    return [random_pure_state(n, seed * 1000 + i) for i in range(count)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
