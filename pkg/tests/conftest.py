import os

import numpy as np
import pytest

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{label:4}  {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def dataset_root(name):
    """Directory of a user-supplied public dataset, or None."""
    path = os.environ.get(f"VESSELKIT_{name.upper().replace('-', '_')}")
    return path if path and os.path.isdir(path) else None
