import numpy as np
import pytest

from liaison_lab.field import PrimeField

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def F():
    return PrimeField(31991)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
