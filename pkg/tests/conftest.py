import numpy as np
import pytest
from hypothesis import strategies as st

from cologne.graph import Graph


def path3():
    return Graph.from_edges(3, [0, 1], [1, 2])


def triangle():
    return Graph.from_edges(3, [0, 1, 2], [1, 2, 0])


def star(leaves=3):
    # center 0, leaves 1..leaves
    return Graph.from_edges(leaves + 1, [0] * leaves, list(range(1, leaves + 1)))


@pytest.fixture
def path():
    return path3()


@pytest.fixture
def tri():
    return triangle()


@st.composite
def small_graphs(draw, max_n=10, weighted=False, allow_directed=True):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, 2 * n))
    src = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    dst = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    w = None
    if weighted:
        w = draw(st.lists(st.sampled_from([0.5, 1.0, 2.0, 3.0]), min_size=m, max_size=m))
    directed = draw(st.booleans()) if allow_directed else False
    return Graph.from_edges(n, src, dst, w, directed=directed)


def random_small_graph(rng, n, p, directed=False):
    mask = rng.random((n, n)) < p
    if not directed:
        mask = np.triu(mask, 1)
    src, dst = np.nonzero(mask)
    return Graph.from_edges(n, src, dst, directed=directed)


# Acceptance checks carry a label; their outcomes are echoed as one line each
# in the terminal summary so they show up without -s.
_acceptance_lines: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): end-to-end acceptance check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    _acceptance_lines.append(f"{status}  {mark.args[0]}  {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
