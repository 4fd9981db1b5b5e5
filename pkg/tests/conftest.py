import itertools
import random

import pytest
from hypothesis import strategies as st

from hdecomp.graphs import Graph
from hdecomp.smallgraphs import all_graphs, connected_graphs


@pytest.fixture(scope="session")
def corpus6():
    """All connected graphs on 1..6 vertices, one per isomorphism class."""
    return connected_graphs(6)


@pytest.fixture(scope="session")
def corpus7():
    """All connected graphs on 1..7 vertices, one per isomorphism class."""
    return connected_graphs(7)


@pytest.fixture(scope="session")
def corpus8():
    """All connected graphs on 1..8 vertices, one per isomorphism class."""
    return connected_graphs(8)


@pytest.fixture(scope="session")
def all6():
    """All graphs (including disconnected) on 1..6 vertices up to iso."""
    out = []
    for n in range(1, 7):
        out += [Graph.from_edge_mask(n, m) for m in all_graphs(n)]
    return out


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    mask = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return Graph.from_edge_mask(n, mask)


@st.composite
def connected_graphs_st(draw, min_n=1, max_n=7):
    from hdecomp.graphs import connected_components

    g = draw(graphs(min_n, max_n))
    comps = connected_components(g)
    if len(comps) == 1:
        return g
    # stitch components into one by a path of bridges
    extra = []
    for a, b in zip(comps, comps[1:]):
        extra.append((max(a), min(b)))
    return Graph(g.n, list(g.edges) + extra)
