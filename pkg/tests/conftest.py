import pytest

from nessdrag.params import reference_params
from nessdrag.response import ResponseContext

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    n, title = marker.args
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "notes": []})
    if not report.passed:
        entry["ok"] = False
    for key, value in item.user_properties:
        if key == "detail":
            entry["notes"].append(f"{item.name}: {value}")
    if not report.passed:
        entry["notes"].append(f"{item.name}: {report.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"{status} criterion {n}: {entry['title']}")
        for note in entry["notes"]:
            terminalreporter.write_line(f"    {note}")


@pytest.fixture(scope="session")
def refset():
    return reference_params()


@pytest.fixture(scope="session")
def ctx(refset):
    return ResponseContext.from_params(refset)
