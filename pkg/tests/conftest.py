import os

import pytest
from hypothesis import HealthCheck, settings

from moufang_lab import PrimeField, Rationals, QuadraticExtension, group_algebra, zorn_algebra

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F2, F3, F5, F7 = PrimeField(2), PrimeField(3), PrimeField(5), PrimeField(7)
QQ = Rationals()
F9 = QuadraticExtension(3, 2)


@pytest.fixture(scope="session")
def zorn2():
    return zorn_algebra(F2)


@pytest.fixture(scope="session")
def zorn3():
    return zorn_algebra(F3)


@pytest.fixture(scope="session")
def gf3c3():
    return group_algebra(F3, 3)


# acceptance tests append (number, status, text) here; printed after the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, text in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {text}")
