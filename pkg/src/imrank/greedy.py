"""Greedy seed selection with lazy marginal re-evaluation.

The quality baseline: iteratively add the node with maximum marginal spread.
Submodularity makes stale marginals upper bounds, so a priority queue of
last-known gains (CELF) skips most re-evaluations while selecting exactly
the same seeds as full re-evaluation each round.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .diffusion import Evaluator
from .graph import Graph


@dataclass(frozen=True)
class GreedyTrace:
    """Selection order, per-seed marginal gains, and evaluation count."""

    seeds_in_order: list[int]
    marginal_gains: list[float]
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "seeds_in_order": self.seeds_in_order,
            "marginal_gains": self.marginal_gains,
            "evaluations": self.evaluations,
        }


def greedy_celf(graph: Graph, k: int, evaluator: Evaluator) -> GreedyTrace:
    """Select k seeds greedily under the given spread evaluator.

    Entries are (negated gain, node id, seed count at evaluation time); an
    entry is fresh iff it was evaluated against the current seed set.  Ties
    break toward the smaller node id.  With a Monte-Carlo evaluator the
    fixed base seed gives all evaluations common random numbers, so the
    estimated spread is itself submodular and the lazy queue stays exact.
    """
    n = graph.node_count
    if not (0 < k <= n):
        raise ValueError(f"k must be in 1..{n}")
    evaluations = 0
    heap: list[tuple[float, int, int]] = []
    for v in range(n):
        gain = evaluator.spread(graph, (v,))
        evaluations += 1
        heap.append((-gain, v, 0))
    heapq.heapify(heap)

    chosen: set[int] = set()
    seeds: list[int] = []
    gains: list[float] = []
    current_spread = 0.0
    while len(seeds) < k:
        neg_gain, v, stamp = heapq.heappop(heap)
        if stamp == len(seeds):
            seeds.append(v)
            gains.append(-neg_gain)
            chosen.add(v)
            current_spread += -neg_gain
        else:
            gain = evaluator.spread(graph, chosen | {v}) - current_spread
            evaluations += 1
            heapq.heappush(heap, (-gain, v, len(seeds)))
    return GreedyTrace(seeds_in_order=seeds, marginal_gains=gains, evaluations=evaluations)


def greedy_naive(graph: Graph, k: int, evaluator: Evaluator) -> GreedyTrace:
    """Reference greedy with full re-evaluation each round (test oracle)."""
    n = graph.node_count
    if not (0 < k <= n):
        raise ValueError(f"k must be in 1..{n}")
    chosen: set[int] = set()
    seeds: list[int] = []
    gains: list[float] = []
    evaluations = 0
    base = 0.0
    for _ in range(k):
        best_gain, best_v = None, None
        for v in range(n):
            if v in chosen:
                continue
            gain = evaluator.spread(graph, chosen | {v}) - base
            evaluations += 1
            if best_gain is None or gain > best_gain:
                best_gain, best_v = gain, v
        chosen.add(best_v)
        seeds.append(best_v)
        gains.append(best_gain)
        base += best_gain
    return GreedyTrace(seeds_in_order=seeds, marginal_gains=gains, evaluations=evaluations)
