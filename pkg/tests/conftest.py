import os

import pytest

from hornvmt.horn import load_system
from hornvmt.translate import translate_system

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name):
    return os.path.join(DATA, name)


@pytest.fixture(scope="session")
def loop_source():
    with open(data_path("loop_example.smt2"), encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def loop_system(loop_source):
    return load_system(loop_source)


@pytest.fixture(scope="session")
def loop_ts(loop_system):
    return translate_system(loop_system)


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
