import time

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")


def pytest_sessionstart(session):
    session.config._t0 = time.perf_counter()
    session.config._acceptance_lines = []


def pytest_collection_modifyitems(config, items):
    # the acceptance suite runs last so its wall-clock criterion covers the whole run
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance(request):
    """``acceptance(number, passed, detail)`` records and prints one result line."""
    config = request.config

    def record(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}"
        config._acceptance_lines.append(line)
        print(line)
        return passed

    record.elapsed = lambda: time.perf_counter() - config._t0
    return record
