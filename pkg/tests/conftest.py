import pytest

from lamiter.rangesieve import sieve_heights, sieve_L

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def L_1e6():
    return sieve_L(10**6, workers=1)


@pytest.fixture(scope="session")
def H_1e6():
    return sieve_heights(10**6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
