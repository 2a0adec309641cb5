from pathlib import Path

import pytest

from biembed.io import parse_current_graph
from biembed.search import search_family

GOLDEN = Path(__file__).parent / "golden"


def load_golden(name):
    return parse_current_graph((GOLDEN / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def k21_pair():
    """The frozen Z_21 pair written by `biembed search --s 0`."""
    return load_golden("k21_A.cg"), load_golden("k21_B.cg")


@pytest.fixture(scope="session")
def k21_swapped():
    return load_golden("k21_swap1_A.cg"), load_golden("k21_swap1_B.cg")


@pytest.fixture(scope="session")
def k21_search():
    return search_family(0)


_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, text = mark.args
    if rep.skipped:
        _criteria[number] = ("SKIP", text, str(rep.longrepr[-1]) if isinstance(rep.longrepr, tuple) else "")
    elif rep.failed:
        _criteria[number] = ("FAIL", text, rep.when)
    elif rep.when == "call" and number not in _criteria:
        _criteria[number] = ("PASS", text, "")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, text, note = _criteria[number]
        line = f"{status} criterion {number}: {text}"
        if note and status == "SKIP":
            line += f" ({note})"
        terminalreporter.write_line(line)
