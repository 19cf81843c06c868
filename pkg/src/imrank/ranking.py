"""Node rankings and the initial-ranking heuristics.

A Ranking is a permutation of node ids together with its inverse.  All
rankers are deterministic: ties always break by ascending node id, and the
random ranker is a seeded Fisher-Yates shuffle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import Graph
from .rng import SplitMix64


@dataclass(frozen=True, eq=False)
class Ranking:
    """A permutation of node ids.

    order[i] is the node at rank i+1 (best first); rank_of[v] is the 1-based
    rank of node v.
    """

    order: np.ndarray
    rank_of: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        n = len(order)
        counts = np.zeros(n, dtype=np.int64)
        if n and (order.min() < 0 or order.max() >= n):
            raise ValueError("order is not a permutation of 0..n-1")
        np.add.at(counts, order, 1)
        if np.any(counts != 1):
            raise ValueError("order is not a permutation of 0..n-1")
        rank_of = np.empty(n, dtype=np.int64)
        rank_of[order] = np.arange(1, n + 1)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "rank_of", rank_of)

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ranking) and np.array_equal(self.order, other.order)

    def top(self, k: int) -> list[int]:
        return [int(v) for v in self.order[:k]]

    def top_set(self, k: int) -> frozenset[int]:
        return frozenset(self.top(k))


def ranking_from_scores(scores: Sequence[float], previous: Ranking | None = None) -> Ranking:
    """Rank nodes by score descending.

    Ties keep the previous ranking's relative order when given (stable
    re-sort), else break by ascending node id.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if previous is not None:
        candidates = previous.order
    else:
        candidates = np.arange(len(scores), dtype=np.int64)
    order = candidates[np.argsort(-scores[candidates], kind="stable")]
    return Ranking(order)


def rank_random(graph: Graph, seed: int) -> Ranking:
    """Uniform random permutation, deterministic in seed."""
    order = list(range(graph.node_count))
    SplitMix64(seed).shuffle(order)
    return Ranking(np.asarray(order, dtype=np.int64))


def rank_degree(graph: Graph) -> Ranking:
    """Out-degree descending (expanded undirected graphs: original degree)."""
    deg = np.diff(graph.out_ptr)
    return ranking_from_scores(deg.astype(np.float64))


def rank_inversed_degree(graph: Graph) -> Ranking:
    """Out-degree ascending; the deliberately bad initial ranking."""
    deg = np.diff(graph.out_ptr)
    return ranking_from_scores(-deg.astype(np.float64))


def rank_strength(graph: Graph) -> Ranking:
    """Sum of out-arc probabilities, descending."""
    strength = np.bincount(graph.arc_src, weights=graph.arc_p, minlength=graph.node_count)
    return ranking_from_scores(strength)


def pagerank_scores(
    graph: Graph,
    teleport: float = 0.15,
    tolerance: float = 1e-10,
    max_iterations: int = 100,
) -> np.ndarray:
    """Power iteration for the uniform random surfer.

    Teleport with probability `teleport`, otherwise follow a uniformly
    random out-arc; dangling mass is redistributed uniformly.  Stops when
    the L1 change drops to `tolerance`.  Scores sum to 1.
    """
    n = graph.node_count
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    follow = 1.0 - teleport
    out_deg = np.diff(graph.out_ptr).astype(np.float64)
    dangling = out_deg == 0
    src, dst = graph.arc_src, graph.arc_dst
    x = np.full(n, 1.0 / n, dtype=np.float64)
    for _ in range(max_iterations):
        contrib = np.bincount(dst, weights=x[src] / out_deg[src], minlength=n)
        loose = x[dangling].sum()
        x_new = teleport / n + follow * (contrib + loose / n)
        delta = np.abs(x_new - x).sum()
        x = x_new
        if delta <= tolerance:
            break
    return x


def rank_pagerank(
    graph: Graph,
    teleport: float = 0.15,
    tolerance: float = 1e-10,
    max_iterations: int = 100,
) -> Ranking:
    """PageRank scores descending, ties by ascending node id."""
    return ranking_from_scores(pagerank_scores(graph, teleport, tolerance, max_iterations))


def write_ranking(ranking: Ranking, graph: Graph, path: str | Path) -> None:
    """Serialize as one node label per line, best rank first."""
    lines = [graph.labels[v] for v in ranking.order]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_node_list(path: str | Path, graph: Graph) -> list[int]:
    """Read node labels, one per line, into ids; unknown labels raise."""
    to_id = graph.label_to_id()
    out = []
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        label = raw.strip()
        if not label:
            continue
        if label not in to_id:
            raise ValueError(f"line {line_no}: unknown node label {label!r}")
        out.append(to_id[label])
    return out
