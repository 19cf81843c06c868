import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import settings

from imrank.graph import Graph, from_arcs
from imrank.ranking import Ranking
from imrank.rng import SplitMix64

# numba-backed calls can be slow on their very first (compiling) example
settings.register_profile("default", deadline=None)
settings.load_profile("default")


# The worked five-node example: nodes v1..v5 as ids 0..4, uniform p=0.2,
# arcs v1->v3, v2->v3, v2->v4, v3->v5, v4->v5.
G5_ARCS = [(0, 2, 0.2), (1, 2, 0.2), (1, 3, 0.2), (2, 4, 0.2), (3, 4, 0.2)]


@pytest.fixture(scope="session")
def g5() -> Graph:
    return from_arcs(5, G5_ARCS)


@pytest.fixture(scope="session")
def identity_ranking_5() -> Ranking:
    return Ranking(np.arange(5))


def random_instance(seed: int, max_nodes: int = 8, max_arcs: int = 10) -> Graph:
    """Deterministic small random graph with random probabilities."""
    rng = SplitMix64(seed)
    n = 1 + rng.randrange(max_nodes)
    cap = min(n * (n - 1), max_arcs)
    m = rng.randrange(cap + 1) if cap else 0
    seen = set()
    arcs = []
    while len(arcs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        arcs.append((u, v, rng.random()))
    return from_arcs(n, arcs)


def random_ranking(n: int, seed: int) -> Ranking:
    order = list(range(n))
    SplitMix64(seed).shuffle(order)
    return Ranking(np.asarray(order, dtype=np.int64))


@st.composite
def graph_strategy(draw, max_nodes: int = 8, max_arcs: int = 12, min_nodes: int = 1):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(
        st.lists(st.sampled_from(pairs), unique=True, min_size=0, max_size=min(len(pairs), max_arcs))
        if pairs
        else st.just([])
    )
    probs = draw(
        st.lists(
            st.floats(0.0, 1.0, allow_nan=False),
            min_size=len(chosen),
            max_size=len(chosen),
        )
    )
    return from_arcs(n, [(u, v, p) for (u, v), p in zip(chosen, probs)])


@st.composite
def graph_and_ranking(draw, max_nodes: int = 8, max_arcs: int = 12):
    graph = draw(graph_strategy(max_nodes=max_nodes, max_arcs=max_arcs))
    order = draw(st.permutations(list(range(graph.node_count))))
    return graph, Ranking(np.asarray(order, dtype=np.int64))
