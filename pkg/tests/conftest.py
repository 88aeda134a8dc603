import pytest

import acceptance_report
from helpers import disjoint_model_set, make_registry


@pytest.fixture(scope="session")
def tiny_registry():
    return make_registry()


@pytest.fixture(scope="session")
def tiny_model_set():
    return disjoint_model_set()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report.LINES:
            terminalreporter.write_line(line)
