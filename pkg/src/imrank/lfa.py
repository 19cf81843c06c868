"""Ranking-based marginal influence estimation and the IMRank iteration.

The last-to-first allocation scan estimates, in one sweep, the marginal
influence spread of every node with respect to a ranking: all scores start
at 1, then the ranking is scanned bottom-up and each node hands fractions of
its score to higher-ranked nodes that can activate it.  The generalized form
widens "can activate" from direct arcs to influence paths of up to `l` hops.
Iterating score computation and re-sorting drives the ranking toward a
fixpoint where the score sequence is nonincreasing (self-consistency).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .diffusion import Evaluator
from .graph import Graph
from .ranking import Ranking, ranking_from_scores

STOP_FIXPOINT = "ranking-fixpoint"
STOP_TOP_K = "top-k-stable"
STOP_MAX_ITER = "max-iterations"


@dataclass(frozen=True)
class MarginalScores:
    """Per-node ranking-based marginal influence estimates."""

    scores: np.ndarray
    ranking_used: Ranking

    def total(self) -> float:
        return float(self.scores.sum())


@dataclass(frozen=True)
class ConvergenceReport:
    """Trace of one IMRank run."""

    iterations: int
    top_k_changed: list[float]
    spread_of_top_k: list[float]
    converged: bool
    stop_reason: str
    k: int | None

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "stop_reason": self.stop_reason,
            "k": self.k,
            "top_k_changed": self.top_k_changed,
            "spread_of_top_k": self.spread_of_top_k,
        }


def lfa_scores(graph: Graph, ranking: Ranking) -> MarginalScores:
    """One bottom-up allocation sweep over direct arcs.

    Every node starts with score 1.  Scanning ranks n..2, the scanned node
    visits its higher-ranked in-neighbors in ascending rank order; each visit
    hands over (current score) * p and keeps the (1 - p) remainder, so the
    transfer to the j-th visited neighbor carries the product of the earlier
    neighbors' misses.  The total score n is conserved.
    """
    n = graph.node_count
    if len(ranking) != n:
        raise ValueError("ranking size does not match graph")
    scores = np.ones(n, dtype=np.float64)
    order, rank_of = ranking.order, ranking.rank_of
    in_ptr, in_src, in_p = graph.in_ptr, graph.in_src, graph.in_p
    for i in range(n, 1, -1):
        v = order[i - 1]
        lo, hi = in_ptr[v], in_ptr[v + 1]
        higher = [
            (rank_of[in_src[e]], int(in_src[e]), float(in_p[e]))
            for e in range(lo, hi)
            if rank_of[in_src[e]] < i
        ]
        higher.sort()
        for _, src, p in higher:
            scores[src] += scores[v] * p
            scores[v] *= 1.0 - p
    return MarginalScores(scores=scores, ranking_used=ranking)


def influence_reach_prob(
    graph: Graph,
    ranking: Ranking,
    target: int,
    max_hops: int,
    prune_threshold: float = 0.0,
) -> dict[int, float]:
    """Probability that each higher-ranked node reaches `target`.

    Enumerates simple reverse paths from `target` of at most `max_hops` arcs
    whose intermediate nodes are all ranked lower than `target` and whose
    endpoint is ranked higher; the search stops at the first higher-ranked
    node (longer continuations are not influence paths).  A path's
    probability is the product of its arc probabilities; paths at or below
    `prune_threshold` are dropped.  Per source the surviving paths combine
    as 1 - prod(1 - q), with a single path contributing its q exactly.
    """
    if max_hops < 1:
        raise ValueError("max_hops must be >= 1")
    if not (0.0 <= prune_threshold < 1.0):
        raise ValueError("prune_threshold must be in [0, 1)")
    if not (0 <= target < graph.node_count):
        raise ValueError(f"node id {target} out of range")
    rank_of = ranking.rank_of
    target_rank = rank_of[target]
    in_ptr, in_src, in_p = graph.in_ptr, graph.in_src, graph.in_p
    path_probs: dict[int, list[float]] = {}
    on_path = {target}

    def visit(node: int, arcs_used: int, prob: float) -> None:
        lo, hi = in_ptr[node], in_ptr[node + 1]
        edges = sorted((int(in_src[e]), float(in_p[e])) for e in range(lo, hi))
        for src, p in edges:
            if src in on_path:
                continue
            q = prob * p
            if q <= prune_threshold:
                continue  # extensions only multiply by further p <= 1
            if rank_of[src] < target_rank:
                path_probs.setdefault(src, []).append(q)
            elif arcs_used + 1 < max_hops:
                on_path.add(src)
                visit(src, arcs_used + 1, q)
                on_path.remove(src)

    visit(target, 0, 1.0)
    rho: dict[int, float] = {}
    for src, qs in path_probs.items():
        if len(qs) == 1:
            rho[src] = qs[0]
        else:
            miss = 1.0
            for q in qs:
                miss *= 1.0 - q
            rho[src] = 1.0 - miss
    return rho


def generalized_lfa_scores(
    graph: Graph,
    ranking: Ranking,
    max_hops: int,
    prune_threshold: float = 0.0,
) -> MarginalScores:
    """Allocation sweep over influence paths of up to `max_hops` arcs.

    Same scan as `lfa_scores` with the direct arc probability replaced by
    the path-based reach probability, so score also flows to non-adjacent
    higher-ranked nodes.  With max_hops=1 and no pruning this reduces to
    `lfa_scores` bit for bit.
    """
    n = graph.node_count
    if len(ranking) != n:
        raise ValueError("ranking size does not match graph")
    if max_hops < 1:
        raise ValueError("max_hops must be >= 1")
    scores = np.ones(n, dtype=np.float64)
    order, rank_of = ranking.order, ranking.rank_of
    for i in range(n, 1, -1):
        v = order[i - 1]
        rho = influence_reach_prob(graph, ranking, int(v), max_hops, prune_threshold)
        for _, src in sorted((rank_of[src], src) for src in rho):
            r = rho[src]
            scores[src] += scores[v] * r
            scores[v] *= 1.0 - r
    return MarginalScores(scores=scores, ranking_used=ranking)


ScoreFn = Callable[[Graph, Ranking], MarginalScores]


def lfa_score_fn(max_hops: int = 1, prune_threshold: float = 0.0) -> ScoreFn:
    """Score function for `imrank_iterate` backed by (generalized) LFA."""
    if max_hops == 1 and prune_threshold == 0.0:
        return lfa_scores
    return lambda graph, ranking: generalized_lfa_scores(graph, ranking, max_hops, prune_threshold)


def exact_marginal_score_fn(evaluator: Evaluator, decimals: int = 12) -> ScoreFn:
    """Score function that computes true telescoped marginals (oracle use).

    Scores are rounded to `decimals` places: enumeration rounding (~1e-15)
    otherwise makes structurally equal marginals compare unequal, which can
    livelock the re-sort on ulp noise instead of reaching its fixpoint.
    """

    def fn(graph: Graph, ranking: Ranking) -> MarginalScores:
        marginals = ranking_marginals(graph, ranking, evaluator)
        scores = np.empty(graph.node_count, dtype=np.float64)
        scores[ranking.order] = np.round(marginals, decimals)
        return MarginalScores(scores=scores, ranking_used=ranking)

    return fn


def imrank_iterate(
    graph: Graph,
    initial: Ranking,
    k: int | None,
    max_hops: int = 1,
    prune_threshold: float = 0.0,
    max_iterations: int = 10,
    score_fn: ScoreFn | None = None,
) -> tuple[Ranking, ConvergenceReport]:
    """Iterate score computation and re-sorting from `initial`.

    Each round computes ranking-based marginal scores for the current
    ranking and re-sorts nodes by score descending (ties keep their previous
    relative order, so an all-ties round is a fixpoint).  Stops when the
    ranking repeats exactly, when the top-k set is unchanged between two
    successive rankings (k=None disables this check), or after
    `max_iterations` rounds.
    """
    n = graph.node_count
    if k is not None and not (0 < k <= n):
        raise ValueError(f"k must be in 1..{n}")
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    if score_fn is None:
        score_fn = lfa_score_fn(max_hops, prune_threshold)

    current = initial
    kk = k if k is not None else n
    top_changed: list[float] = []
    topk_spread: list[float] = []
    stop_reason = STOP_MAX_ITER
    iterations = 0
    for _ in range(max_iterations):
        iterations += 1
        ms = score_fn(graph, current)
        new = ranking_from_scores(ms.scores, previous=current)
        prev_top = current.top_set(kk)
        new_top = new.top_set(kk)
        top_changed.append(len(new_top - prev_top) / kk if kk else 0.0)
        topk_spread.append(float(ms.scores[new.order[:kk]].sum()))
        if new == current:
            stop_reason = STOP_FIXPOINT
            break
        if k is not None and new_top == prev_top:
            current = new
            stop_reason = STOP_TOP_K
            break
        current = new
    report = ConvergenceReport(
        iterations=iterations,
        top_k_changed=top_changed,
        spread_of_top_k=topk_spread,
        converged=stop_reason != STOP_MAX_ITER,
        stop_reason=stop_reason,
        k=k,
    )
    return current, report


def ranking_marginals(graph: Graph, ranking: Ranking | Sequence[int], evaluator: Evaluator) -> np.ndarray:
    """True ranking-based marginals: spread gain of each node over the
    higher-ranked prefix, computed with the given evaluator."""
    order = ranking.order if isinstance(ranking, Ranking) else np.asarray(ranking, dtype=np.int64)
    prefix = evaluator.prefix_spreads(graph, order)
    return np.diff(prefix)


def is_self_consistent(
    graph: Graph,
    ranking: Ranking,
    evaluator: Evaluator,
    slack: float = 1e-9,
) -> tuple[bool, tuple[int, int] | None]:
    """Check that true ranking-based marginals are nonincreasing.

    Returns (ok, violation); the violation is the first pair of 1-based
    ranks (i, j) with i < j whose marginals differ by more than `slack`
    in the wrong direction.  Slack absorbs Monte-Carlo noise; with the
    exact evaluator a tiny slack (1e-9) covers float rounding only.
    """
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    marginals = ranking_marginals(graph, ranking, evaluator)
    min_val = np.inf
    min_idx = 0
    for j, value in enumerate(marginals):
        if value > min_val + slack:
            return False, (min_idx + 1, j + 1)
        if value < min_val:
            min_val = value
            min_idx = j
    return True, None
