import functools

import pytest

from rcms.enumeration import class_representatives
from rcms.expand import assemble_order
from rcms.graphs import merge

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def reps_for(m: int):
    return tuple(class_representatives(m))


@functools.lru_cache(maxsize=None)
def records_for(m: int):
    return tuple(merge([assemble_order(m, reps_for(m))]))


@pytest.fixture(scope="session")
def reps():
    return reps_for


@pytest.fixture(scope="session")
def records():
    return records_for


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
