import os

import pytest
from hypothesis import settings

from milnorlab.polycore import parse_polynomial

settings.register_profile("default", derandomize=True, deadline=None)
settings.register_profile("thorough", max_examples=800, deadline=None)
settings.load_profile(os.environ.get("MILNORLAB_HYPOTHESIS", "default"))

XY = ("x", "y")

_ACCEPTANCE: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label, title): one acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "_acceptance", None)
    if marker is None:
        return
    label, title = marker
    entry = _ACCEPTANCE.setdefault(label, {"title": title, "ok": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed or (report.when == "call" and report.skipped):
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        report._acceptance = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s[2:])):
        e = _ACCEPTANCE[label]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"{status} {label}: {e['title']}")


@pytest.fixture
def P():
    def make(text, variables=XY):
        return parse_polynomial(text, variables)

    return make
