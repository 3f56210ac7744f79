"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import re

_RESULTS: dict[int, tuple[str, str]] = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m or "test_acceptance.py" not in report.nodeid:
        return
    k = int(m.group(1))
    title = m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        previous = _RESULTS.get(k, ("PASS", title))[0]
        status = "PASS" if report.outcome == "passed" and previous == "PASS" else "FAIL"
        _RESULTS[k] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RESULTS):
        status, title = _RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {status}  ({title})")
