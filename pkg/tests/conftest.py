import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from roquette.constructions import group_from_spec  # noqa: E402

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def cached_group(spec):
    return group_from_spec(spec)


@pytest.fixture
def group():
    return cached_group


@pytest.fixture
def record_criterion():
    def record(number, ok, text):
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
