import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or not hasattr(item.module, "CRITERIA"):
        return
    label = item.module.CRITERIA.get(item.name, item.name)
    _acceptance_lines.append(f"{'PASS' if report.passed else 'FAIL'}  {label}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
