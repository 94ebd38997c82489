import json
import re
from fractions import Fraction
from pathlib import Path

import pytest

FROZEN_PATH = Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    """Reference values written by tests/oracles/generate_frozen.py."""
    return json.loads(FROZEN_PATH.read_text())


def fr(text) -> Fraction:
    return Fraction(str(text))


# one PASS/FAIL line per acceptance criterion, after the normal report

_CRITERION = re.compile(r"test_acceptance\.py::test_c(\d\d)_(\w+)")
_results: dict = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(key)
        if prev is None or prev[0] == "PASS":
            _results[key] = ("PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), (status, secs) in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {num:2d} {status}  {name.replace('_', ' ')}  ({secs:.2f} s)")
