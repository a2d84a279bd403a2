import numpy as np
import pytest

from quditcorr.io import bell_matrix, mixed4, qutrit_test

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def bell():
    return bell_matrix()


@pytest.fixture
def mixed():
    return mixed4()


@pytest.fixture
def qutrit():
    return qutrit_test()


@pytest.fixture
def rng():
    return np.random.default_rng(20141)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
