import json
from pathlib import Path

import pytest

from heunc.core import Params

DATA = Path(__file__).with_name("data")

H1 = Params(0.25, 0, 0.5, 0.5, 0)
H3 = Params(6, 0, 1, 1, 0)
H5 = Params(-0.25, 0, 0.5, 0.5, 0)
H7 = Params(0.75, 1.5, 0.5, 0.5, 1)
H8 = Params(1.25, 1.5, 0.5, 0.5, 1)
H9 = Params(-2, 0, -1, 0, 1)
GENERIC = Params(0.3 + 0.1j, 0.7, 1.3, -0.4, 2 - 1j)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture(scope="session")
def oracles():
    with open(DATA / "oracles.json") as fh:
        return json.load(fh)


# -- acceptance report: one pass/fail line per criterion ----------------------

ACCEPTANCE_DETAIL = {}
_acceptance_outcome = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        n = int(report.nodeid.rsplit("test_criterion_", 1)[1].split("_")[0])
        _acceptance_outcome[n] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcome:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance_outcome):
        status = "PASS" if _acceptance_outcome[n] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {ACCEPTANCE_DETAIL.get(n, '')}")
