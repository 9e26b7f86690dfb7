import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from turingtest import zoo  # noqa: E402
from turingtest.memclass import memory_class_enum  # noqa: E402
from turingtest.oracle import BoundedPi  # noqa: E402


@pytest.fixture(scope="session")
def universe():
    return [e.load() for e in zoo.entries(role="subject")]


@pytest.fixture(scope="session")
def closed_pi(universe):
    return BoundedPi.closed(universe)


@pytest.fixture(scope="session")
def mem213():
    return memory_class_enum(2, 1, 3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
