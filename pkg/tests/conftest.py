import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = pytest.StashKey()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def record(request):
    """record(criterion, ok, detail): one acceptance line for the terminal summary."""
    lines = request.config.stash[_RESULTS]

    def add(criterion, ok, detail):
        lines.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
        print(lines[-1])
    return add


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_RESULTS]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
