from __future__ import annotations

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None or "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n, title in sorted(CRITERIA.items()):
        outcomes = _results.get(n)
        status = "NOT RUN" if outcomes is None else ("PASS" if all(outcomes) else "FAIL")
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
