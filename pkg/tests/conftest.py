import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


_CONFIG = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")
    config._criteria = {}
    _CONFIG.append(config)


def pytest_runtest_logreport(report):
    # one verdict per criterion; a failure in any phase sticks
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    criteria = _CONFIG[0]._criteria
    ok = report.passed or (report.when != "call" and not report.failed)
    prev = criteria.get(marker, True)
    criteria[marker] = prev and ok


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), ok in sorted(config._criteria.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}")
