import warnings

import pytest

from quadsqueeze.verify import build_fixtures

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fixtures():
    return build_fixtures()


@pytest.fixture(scope="session")
def harmonic(fixtures):
    return fixtures["harmonic"]


@pytest.fixture(scope="session")
def free(fixtures):
    return fixtures["free"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    warnings.filterwarnings("default", category=DeprecationWarning)
