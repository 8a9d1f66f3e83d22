import sys
from collections import defaultdict
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qwalk import graph as G  # noqa: E402

_criteria: dict = {}
_outcomes: dict = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    _criteria[number] = title
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[number].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcomes[number]
        ok = bool(results) and all(o == "passed" for _, o in results)
        failed = [name for name, o in results if o != "passed"]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {_criteria[number]}"
        if failed:
            line += f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(line)


def star(leaves: int) -> G.Graph:
    return G.build_graph(leaves + 1, [(0, k) for k in range(1, leaves + 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


SMALL_GRAPHS = [
    G.build_graph(1, []),
    G.complete(2),
    G.build_graph(3, []),
    G.line(3),
    G.cycle(4),
    G.line(5),
    G.cycle(5),
    star(4),
    G.cycle(6),
    G.complete(5),
    G.random_graph(6, 0.5, 3),
    G.random_graph(7, 0.4, 2),
    G.hypercube(8),
    G.cycle(8),
    G.random_graph(8, 0.4, 1),
    G.complete(8),
]
