import numpy as np
import pytest

from open_boson.params import SystemParams


@pytest.fixture
def default_params():
    return SystemParams()


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)



_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion():
    """Record one PASS/FAIL line for an acceptance criterion; returns the verdict."""

    def record(label: str, passed: bool, detail: str) -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
