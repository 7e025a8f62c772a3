import numpy as np
import pytest

from wpmin.surfaces import make_family


@pytest.fixture(scope="session")
def vilhena3():
    return make_family("vilhena3")


@pytest.fixture(scope="session")
def weber2():
    return make_family("weber2")


@pytest.fixture(scope="session")
def cg():
    return make_family("chen-gackstatter")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
