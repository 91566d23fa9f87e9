import sys

import pytest
from hypothesis import settings

from strangedual.polyalg import SparsePoly, parse_poly
from strangedual.tables import load_fixtures

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")

XYZ = ("x", "y", "z")


def P(text, variables=XYZ) -> SparsePoly:
    return parse_poly(text, variables)


@pytest.fixture(scope="session")
def fx():
    return load_fixtures()


def pytest_terminal_summary(terminalreporter):
    # acceptance criteria lines are collected by test_acceptance.py
    module = sys.modules.get("test_acceptance")
    RESULTS = getattr(module, "RESULTS", None)
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
