"""Synthetic graphs for experiments and tests.

All generators are deterministic in their seed and return (node_count,
arc list) pairs ready for `graph.from_arcs`; probabilities are left at the
0.0 placeholder for a model assigner unless stated otherwise.
"""

from __future__ import annotations

from .graph import Graph, from_arcs
from .rng import SplitMix64


def scale_free_graph(n: int, attach: int, seed: int, directed: bool = False) -> Graph:
    """Preferential-attachment graph: each new node links to `attach`
    distinct existing nodes chosen proportionally to current degree.

    With directed=False (the default) every link is expanded to both arcs,
    matching how undirected social networks are loaded.
    """
    if n < attach + 1:
        raise ValueError("need n > attach")
    rng = SplitMix64(seed)
    # repeated-nodes urn: sampling from it is degree-proportional
    urn: list[int] = list(range(attach + 1))
    edges: list[tuple[int, int]] = [(i, attach) for i in range(attach)]
    for i, j in edges:
        urn.extend((i, j))
    for v in range(attach + 1, n):
        targets: set[int] = set()
        while len(targets) < attach:
            targets.add(urn[rng.randrange(len(urn))])
        for t in sorted(targets):
            edges.append((v, t))
            urn.extend((v, t))
    arcs: list[tuple[int, int, float]] = []
    for u, v in edges:
        arcs.append((u, v, 0.0))
        if not directed:
            arcs.append((v, u, 0.0))
    return from_arcs(n, arcs, directed=directed, missing_p=len(arcs))


def small_world_graph(n: int, neighbors: int, rewire: float, seed: int) -> Graph:
    """Ring lattice with `neighbors` links per side, each rewired with
    probability `rewire` to a uniform random endpoint (kept simple)."""
    if n < 2 * neighbors + 2:
        raise ValueError("need n > 2*neighbors + 1")
    rng = SplitMix64(seed)
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for u in range(n):
        for step in range(1, neighbors + 1):
            v = (u + step) % n
            if rng.random() < rewire:
                while True:
                    w = rng.randrange(n)
                    if w != u and (u, w) not in seen and (w, u) not in seen:
                        v = w
                        break
            if (u, v) in seen or (v, u) in seen:
                continue
            seen.add((u, v))
            edges.append((u, v))
    arcs: list[tuple[int, int, float]] = []
    for u, v in edges:
        arcs.extend(((u, v, 0.0), (v, u, 0.0)))
    return from_arcs(n, arcs, directed=False, missing_p=len(arcs))


def random_graph(n: int, arc_count: int, seed: int, random_p: bool = True) -> Graph:
    """Uniform random simple directed graph with `arc_count` arcs.

    Probabilities are uniform in [0, 1) when random_p, else the placeholder.
    """
    cap = n * (n - 1)
    if arc_count > cap:
        raise ValueError(f"at most {cap} arcs possible")
    rng = SplitMix64(seed)
    seen: set[tuple[int, int]] = set()
    arcs: list[tuple[int, int, float]] = []
    while len(arcs) < arc_count:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        arcs.append((u, v, rng.random() if random_p else 0.0))
    missing = 0 if random_p else arc_count
    return from_arcs(n, arcs, directed=True, missing_p=missing)
