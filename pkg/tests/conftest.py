import pytest
from hypothesis import settings

# Reproducible property runs: the same examples every time.
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

_results: dict[str, list[bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(label, []).append(report.passed)


def _order(label: str):
    head = label.split()[0]
    return (int(head[2:]) if head[2:].isdigit() else 99, label)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_results, key=_order):
        ok = all(_results[label])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
