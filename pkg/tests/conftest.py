import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from netbias.graph import MAJORITY, MINORITY, AttributedGraph


def make_graph(n, edges, labels=None):
    if labels is None:
        labels = [MAJORITY] * n
    return AttributedGraph.from_edges(n, edges, labels)


@pytest.fixture
def triangle():
    return make_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star():
    # centre 0, leaves 1..3
    return make_graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def two_triangles():
    return make_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@st.composite
def graphs(draw, min_nodes=2, max_nodes=30):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 120))
                  if pairs else st.just([]))
    labels = draw(st.lists(st.sampled_from([MAJORITY, MINORITY]), min_size=n, max_size=n))
    return make_graph(n, chosen, labels)


def random_graph(rng, n, p, minority_share=0.3):
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < p
    edges = np.column_stack((iu[0][keep], iu[1][keep]))
    labels = (rng.random(n) < minority_share).astype(int)
    return make_graph(n, edges, labels)


# one "criterion N: PASS/FAIL ..." line per acceptance check, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
