"""Shared databases for the acceptance suite and its pass/fail summary."""

import time

import pytest

from trenum.relative import enumerate_imprimitive
from trenum.search import StageCounters, enumerate_primitive, merge_dedup

CRITERIA = {
    "1": "degree 2, B=30: 273 fields, min d_F 5",
    "2": "degree 3, B=25: 630 fields, min d_F 49",
    "3": "degree 4, B=20: 1578 combined, min d_F 725",
    "3b": "degree 4, B=20: imprimitive pipeline alone yields 702",
    "4": "degree 5, B=17: 674 fields, min d_F 14641",
    "5": "degree 6, B=16: 827 combined, min d_F 300125",
    "5b": "degree 6, B=16: imprimitive pipeline alone yields 420",
    "6": "delta_F <= 14 counts 59, 86, 277, 170, 263",
    "7": "verify reproduces the octic and nonic rows",
    "8": "property suites",
}

_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    key = getattr(report, "criterion", None)
    if key is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        prev = _outcomes.get(key, "passed")
        if report.failed:
            _outcomes[key] = "failed"
        elif report.skipped and prev != "failed":
            _outcomes[key] = "skipped"
        else:
            _outcomes.setdefault(key, "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = str(m.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for key, text in CRITERIA.items():
        state = _outcomes.get(key)
        label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP", None: "not run"}[state]
        terminalreporter.write_line(f"[{label:>7}] criterion {key:<3} {text}")


class Timed:
    def __init__(self, fn):
        c = StageCounters()
        t = time.perf_counter()
        self.records = fn(c)
        self.seconds = time.perf_counter() - t
        self.counters = c


@pytest.fixture(scope="session")
def db2():
    return Timed(lambda c: enumerate_primitive(2, 30, counters=c))


@pytest.fixture(scope="session")
def db3():
    return Timed(lambda c: enumerate_primitive(3, 25, counters=c))


@pytest.fixture(scope="session")
def db4():
    prim = Timed(lambda c: enumerate_primitive(4, 20, counters=c))
    bases = {2: enumerate_primitive(2, 20)}
    imp = Timed(lambda c: enumerate_imprimitive(4, 20, bases, counters=c))
    return prim, imp


@pytest.fixture(scope="session")
def db5():
    return Timed(lambda c: enumerate_primitive(5, 17, counters=c))


@pytest.fixture(scope="session")
def db6():
    prim = Timed(lambda c: enumerate_primitive(6, 16, counters=c))
    bases = {2: enumerate_primitive(2, 16), 3: enumerate_primitive(3, 16)}
    imp = Timed(lambda c: enumerate_imprimitive(6, 16, bases, counters=c))
    return prim, imp


@pytest.fixture(scope="session")
def database(db2, db3, db4, db5, db6):
    recs = db2.records + db3.records + db5.records
    for prim, imp in (db4, db6):
        recs += prim.records + imp.records
    return merge_dedup(recs)
