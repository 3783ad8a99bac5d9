from __future__ import annotations

import pytest

from fiedler_lab.graph import Graph, build_path, random_tree

ROSE_TABLES = {
    # path 0..8 (leaf tip .. stem tip), then petal, hub
    11: ([-0.0093, -0.0085, -0.0071, -0.0051, -0.1481, -0.2793, -0.3881, -0.4659, -0.5064], 0.1525, 0.1403),
    10: ([0.0074, 0.0068, 0.0056, 0.0040, -0.1414, -0.2752, -0.3865, -0.4662, -0.5077], 0.1606, 0.1474),
    3: ([0.2514, 0.2253, 0.1758, 0.1081, -0.0597, -0.2213, -0.3600, -0.4612, -0.5147], 0.2198, 0.1970),
}

_ACCEPTANCE: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        _ACCEPTANCE.append((marker.args[0], "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{status}] {label}")


def two_disjoint_edges() -> Graph:
    return Graph.from_edges(4, [(0, 1), (2, 3)])


def small_trees(count: int = 40, lo: int = 4, hi: int = 40) -> list[Graph]:
    return [random_tree(lo + (seed * 7) % (hi - lo + 1), seed) for seed in range(count)]


@pytest.fixture
def path5() -> Graph:
    return build_path(5)
