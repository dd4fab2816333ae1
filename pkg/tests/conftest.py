"""Collects acceptance outcomes and prints one line per criterion at the end."""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    props = dict(report.user_properties)
    status = "PASS" if report.passed else "FAIL"
    if props.get("soft_failed"):
        status = "SOFT-FAIL"
    _RESULTS[number] = (status, title, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, title, detail = _RESULTS[number]
        line = "%-9s criterion %d: %s" % (status, number, title)
        if detail:
            line += "  [%s]" % detail
        tr.write_line(line)
