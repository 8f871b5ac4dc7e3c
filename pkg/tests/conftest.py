import re
import time

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results = {}
_start = [0.0]


def pytest_sessionstart(session):
    _start[0] = time.perf_counter()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    ok = _results.get(k, True)
    if report.failed or (report.when == "call" and report.skipped):
        ok = False
    _results[k] = ok


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance")
    for k in sorted(_results):
        tr.write_line(f"ACCEPTANCE {k:2d} {'PASS' if _results[k] else 'FAIL'}")
    elapsed = time.perf_counter() - _start[0]
    tr.write_line(f"session runtime {elapsed:.1f} s (budget 60 s): {'PASS' if elapsed < 60 else 'FAIL'}")


@pytest.fixture
def rng():
    import random

    return random.Random(1234)
