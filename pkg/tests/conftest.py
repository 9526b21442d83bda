from __future__ import annotations

import pytest

from netdim.graph_core import Graph, karate

_CRITERIA: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        if report.skipped and isinstance(report.longrepr, tuple):
            status += f" ({report.longrepr[2]})"
        _CRITERIA.append((marker.args[0], marker.args[1], status))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    # parametrized criteria report once: any FAIL wins, then PASS, else SKIP
    merged: dict[int, tuple[str, list[str]]] = {}
    for number, text, status in _CRITERIA:
        merged.setdefault(number, (text, []))[1].append(status)
    for number in sorted(merged):
        text, statuses = merged[number]
        status = next(
            (s for verdict in ("FAIL", "PASS") for s in statuses if s.startswith(verdict)),
            statuses[0],
        )
        terminalreporter.write_line(f"criterion {number}: {status} - {text}")


@pytest.fixture(scope="session")
def karate_graph() -> Graph:
    return karate()
