import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from modholder import modcoeffs  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def seqs():
    """Small materializations of every built-in sequence."""
    return {name: modcoeffs.cached(name, n) for name, n in [
        ("elliptic14", 4096), ("theta12", 4096), ("jacobi", 4096), ("harmonic", 4096),
        ("eisenstein4", 4096), ("eisenstein6", 4096), ("eisenstein8", 400),
    ]}


@pytest.fixture(scope="session")
def full():
    """Desk-scale materializations (the CLI defaults)."""
    return lambda name: modcoeffs.cached(name)


# -- acceptance summary: one PASS/FAIL line per criterion ---------------------

_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test belongs to")


def pytest_runtest_logreport(report):
    mark = getattr(report, "criterion", None)
    if mark is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria.setdefault(mark, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), runs in sorted(_criteria.items()):
        ok = all(o == "passed" for _, o in runs)
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title} "
                                    f"({sum(o == 'passed' for _, o in runs)}/{len(runs)} checks)")
