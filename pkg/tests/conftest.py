import pytest

from lowerable.germ import validate

GERMS = {
    "cusp": {"n": 1, "p": 2, "branches": [["x1^2", "x1^3"]]},
    "identity": {"n": 1, "p": 1, "branches": [["x1"]]},
    "e6": {"n": 1, "p": 2, "branches": [["x1^3", "x1^4"]]},
    "e8": {"n": 1, "p": 2, "branches": [["x1^3", "x1^5"]]},
    "a4": {"n": 1, "p": 2, "branches": [["x1^2", "x1^5"]]},
    "double_line": {"n": 1, "p": 2, "branches": [["x1", "0"], ["0", "x1"]]},
    "fold": {"n": 1, "p": 1, "branches": [["x1^2"]]},
    "surface": {"n": 2, "p": 4, "branches": [["x1", "x2^2", "x1 x2", "x2^3"]]},
    "tacnode_pair": {"n": 1, "p": 2, "branches": [["x1", "x1^2"], ["x1", "-x1^2"]]},
}


def germ(name):
    return validate(GERMS[name])


@pytest.fixture
def cusp():
    return germ("cusp")


@pytest.fixture
def identity():
    return germ("identity")


@pytest.fixture
def double_line():
    return germ("double_line")


# -- acceptance bookkeeping: one PASS/FAIL line per criterion ---------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _criteria.setdefault(num, {"title": title, "ok": True, "ran": 0})


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    entry = _criteria[mark.args[0]]
    if call.when == "call":
        entry["ran"] += 1
    if call.excinfo is not None:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        e = _criteria[num]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}  {e['title']}")
