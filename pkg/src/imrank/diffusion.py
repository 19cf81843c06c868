"""Influence spread under the independent cascade model.

Three evaluation routes:

* `simulate_cascade` / `estimate_spread`: Monte-Carlo trials, compiled with
  numba.  Each trial realizes a live-edge world: the coin for arc `a` in
  trial `i` is a pure function of (base_seed, i, a), so the activated set is
  independent of traversal order, results are bit-identical across runs and
  thread counts, and repeated evaluations share worlds (common random
  numbers).
* `exact_spread` / `exact_prefix_spreads`: exhaustive enumeration of all
  2^|E| live-edge worlds, the desk-scale oracle (capped at 25 arcs).
* `marginal_spread`: spread difference under either evaluator.

Trial statistics are accumulated as exact integers, so means and standard
errors do not depend on summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .graph import Graph, check_seeds
from .rng import mix64_array

MAX_EXACT_ARCS = 25

_INV53 = 1.0 / 9007199254740992.0  # 2^-53


@njit(cache=True, inline="always")
def _mix64(z):
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _run_cascade(out_ptr, out_dst, out_p, arc_hash, seeds, trial_key, active, queue, head, tail):
    """BFS over live arcs from `seeds`, continuing an in-progress queue.

    Live-edge coins make the activated set independent of traversal order,
    so seeds may be fed incrementally.  Returns (head, tail); queue[:tail]
    lists every activated node, which is also how callers undo `active`.
    """
    for i in range(len(seeds)):
        s = seeds[i]
        if not active[s]:
            active[s] = True
            queue[tail] = s
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(out_ptr[u], out_ptr[u + 1]):
            v = out_dst[e]
            if not active[v]:
                bits = _mix64(trial_key ^ arc_hash[e])
                if np.float64(bits >> np.uint64(11)) * _INV53 < out_p[e]:
                    active[v] = True
                    queue[tail] = v
                    tail += 1
    return head, tail


@njit(cache=True)
def _trial_counts(out_ptr, out_dst, out_p, arc_hash, seeds, trials, base_seed, n):
    counts = np.empty(trials, dtype=np.int64)
    active = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    for i in range(trials):
        key = _mix64(base_seed ^ _mix64(np.uint64(i)))
        _, tail = _run_cascade(out_ptr, out_dst, out_p, arc_hash, seeds, key, active, queue, 0, 0)
        counts[i] = tail
        for j in range(tail):
            active[queue[j]] = False
    return counts


@njit(cache=True)
def _prefix_trial_sums(out_ptr, out_dst, out_p, arc_hash, order, trials, base_seed, n):
    """Per-prefix activation counts, summed (and squared) over trials.

    Seeds are added one at a time in `order`; live-edge reachability is
    monotone, so each prefix count extends the previous one within a trial.
    """
    m = len(order)
    sums = np.zeros(m, dtype=np.int64)
    sumsq = np.zeros(m, dtype=np.int64)
    active = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    one = np.empty(1, dtype=np.int64)
    for i in range(trials):
        key = _mix64(base_seed ^ _mix64(np.uint64(i)))
        head, tail = 0, 0
        for j in range(m):
            one[0] = order[j]
            head, tail = _run_cascade(out_ptr, out_dst, out_p, arc_hash, one, key, active, queue, head, tail)
            sums[j] += tail
            sumsq[j] += tail * tail
        for j in range(tail):
            active[queue[j]] = False
    return sums, sumsq


@njit(cache=True)
def _exact_prefix_sums(arc_src_c, arc_dst_c, arc_p, order_c, n_compact):
    """Expected reachable-set sizes of every prefix of `order_c`.

    Enumerates all 2^|E| live-edge worlds over the arc-incident nodes
    (compact ids, bitmask-encoded).  Entries of `order_c` that are -1 are
    handled by the caller.
    """
    n_arcs = len(arc_src_c)
    n_worlds = 1 << n_arcs
    m = len(order_c)
    sums = np.zeros(m, dtype=np.float64)
    adj = np.empty(n_compact, dtype=np.uint64)
    bit = np.empty(n_compact, dtype=np.uint64)
    for c in range(n_compact):
        bit[c] = np.uint64(1) << np.uint64(c)
    for w in range(n_worlds):
        pw = 1.0
        for c in range(n_compact):
            adj[c] = np.uint64(0)
        for e in range(n_arcs):
            if (w >> e) & 1:
                pw *= arc_p[e]
                adj[arc_src_c[e]] |= bit[arc_dst_c[e]]
            else:
                pw *= 1.0 - arc_p[e]
        if pw == 0.0:
            continue
        act = np.uint64(0)
        cnt = 0
        for j in range(m):
            c = order_c[j]
            if c >= 0 and (act & bit[c]) == np.uint64(0):
                frontier = bit[c]
                act |= frontier
                cnt += 1
                while frontier != np.uint64(0):
                    nxt = np.uint64(0)
                    for b in range(n_compact):
                        if (frontier & bit[b]) != np.uint64(0):
                            nxt |= adj[b]
                    nxt &= ~act
                    f2 = nxt
                    for b in range(n_compact):
                        if (f2 & bit[b]) != np.uint64(0):
                            cnt += 1
                    act |= nxt
                    frontier = nxt
            sums[j] += pw * cnt
    return sums


def _arc_hash_out(graph: Graph) -> np.ndarray:
    # coins are keyed by the load-order arc id, not the CSR slot
    return mix64_array(graph.out_arc.astype(np.uint64))


@dataclass(frozen=True)
class SpreadEstimate:
    """Monte-Carlo estimate of influence spread."""

    mean: float
    trials: int
    std_error: float
    base_seed: int


def simulate_cascade(graph: Graph, seeds: Iterable[int], trial_seed: int) -> set[int]:
    """One independent-cascade realization; returns the activated node set.

    When a node activates, each of its out-arcs fires once with the arc's
    probability against a still-inactive target.  The coin for an arc is a
    pure function of (trial_seed, arc id), so the realization is a live-edge
    world and the result is deterministic for a given trial_seed.
    """
    seed_list = check_seeds(graph, seeds)
    n = graph.node_count
    active = np.zeros(n, dtype=np.bool_)
    queue = np.empty(max(n, 1), dtype=np.int64)
    key = np.uint64(trial_seed & ((1 << 64) - 1))
    _run_cascade(
        graph.out_ptr,
        graph.out_dst,
        graph.out_p,
        _arc_hash_out(graph),
        np.asarray(seed_list, dtype=np.int64),
        key,
        active,
        queue,
        0,
        0,
    )
    return set(int(v) for v in np.nonzero(active)[0])


def estimate_spread(graph: Graph, seeds: Iterable[int], trials: int, base_seed: int) -> SpreadEstimate:
    """Mean activated count over `trials` Monte-Carlo cascades.

    Trial i runs with key mix64(base_seed ^ mix64(i)); the result does not
    depend on execution order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seed_list = check_seeds(graph, seeds)
    seeds_arr = np.asarray(seed_list, dtype=np.int64)
    counts = _trial_counts(
        graph.out_ptr,
        graph.out_dst,
        graph.out_p,
        _arc_hash_out(graph),
        seeds_arr,
        trials,
        np.uint64(base_seed & ((1 << 64) - 1)),
        graph.node_count,
    )
    return _estimate_from_counts(int(counts.sum()), int((counts * counts).sum()), trials, base_seed)


def _estimate_from_counts(total: int, total_sq: int, trials: int, base_seed: int) -> SpreadEstimate:
    mean = total / trials
    if trials > 1:
        # sample variance with an exact integer numerator
        numerator = trials * total_sq - total * total
        std_error = math.sqrt(max(numerator, 0) / (trials - 1)) / trials
    else:
        std_error = 0.0
    return SpreadEstimate(mean=mean, trials=trials, std_error=std_error, base_seed=base_seed)


def mc_prefix_estimates(
    graph: Graph, order: Sequence[int], trials: int, base_seed: int
) -> list[SpreadEstimate]:
    """SpreadEstimate for every prefix of `order`, sharing trial worlds.

    Entry j estimates the spread of set(order[:j+1]); all prefixes of one
    trial see the same live-edge world, so differences are low-variance
    marginal estimates (common random numbers).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    order_arr = np.asarray(list(order), dtype=np.int64)
    if len(order_arr) != len(set(order_arr.tolist())):
        raise ValueError("order contains duplicate nodes")
    if len(order_arr) and (order_arr.min() < 0 or order_arr.max() >= graph.node_count):
        raise ValueError("node id out of range")
    sums, sumsq = _prefix_trial_sums(
        graph.out_ptr,
        graph.out_dst,
        graph.out_p,
        _arc_hash_out(graph),
        order_arr,
        trials,
        np.uint64(base_seed & ((1 << 64) - 1)),
        graph.node_count,
    )
    return [
        _estimate_from_counts(int(s), int(sq), trials, base_seed)
        for s, sq in zip(sums.tolist(), sumsq.tolist())
    ]


def exact_prefix_spreads(graph: Graph, order: Sequence[int], max_arcs: int = MAX_EXACT_ARCS) -> np.ndarray:
    """Exact spreads of all prefixes of `order` via live-edge enumeration.

    Returns an array of length len(order)+1 whose entry j is the exact
    expected activated count of set(order[:j]); entry 0 is 0.
    """
    m_arcs = graph.arc_count
    if m_arcs > max_arcs:
        raise ValueError(f"exact enumeration capped at {max_arcs} arcs, graph has {m_arcs}")
    order_list = [int(v) for v in order]
    if len(order_list) != len(set(order_list)):
        raise ValueError("order contains duplicate nodes")
    for v in order_list:
        if not (0 <= v < graph.node_count):
            raise ValueError("node id out of range")
    src = graph.arc_src.tolist()
    dst = graph.arc_dst.tolist()
    incident = sorted(set(src) | set(dst))
    compact = {v: c for c, v in enumerate(incident)}
    order_c = np.asarray([compact.get(v, -1) for v in order_list], dtype=np.int64)
    sums = _exact_prefix_sums(
        np.asarray([compact[u] for u in src], dtype=np.int64),
        np.asarray([compact[v] for v in dst], dtype=np.int64),
        graph.arc_p.astype(np.float64),
        order_c,
        len(incident),
    )
    # nodes untouched by any arc contribute exactly 1 from the prefix they join
    out = np.zeros(len(order_list) + 1, dtype=np.float64)
    extra = 0
    for j, v in enumerate(order_list):
        if v not in compact:
            extra += 1
        out[j + 1] = sums[j] + extra
    return out


def exact_spread(graph: Graph, seeds: Iterable[int], max_arcs: int = MAX_EXACT_ARCS) -> float:
    """Exact influence spread by enumerating all live-edge worlds.

    Sums Pr(world) * |reachable(seeds, world)| over every subset of arcs;
    usable up to `max_arcs` (default 25) arcs.
    """
    seed_list = check_seeds(graph, seeds)
    if not seed_list:
        return 0.0
    return float(exact_prefix_spreads(graph, seed_list, max_arcs)[-1])


@dataclass(frozen=True)
class ExactEvaluator:
    """Spread evaluation by exhaustive live-edge enumeration."""

    max_arcs: int = MAX_EXACT_ARCS

    def spread(self, graph: Graph, seeds: Iterable[int]) -> float:
        return exact_spread(graph, seeds, self.max_arcs)

    def prefix_spreads(self, graph: Graph, order: Sequence[int]) -> np.ndarray:
        return exact_prefix_spreads(graph, order, self.max_arcs)


@dataclass(frozen=True)
class MonteCarloEvaluator:
    """Spread evaluation by seeded Monte-Carlo simulation.

    A fixed base_seed means every evaluation shares the same trial worlds,
    so spread comparisons and marginals use common random numbers.
    """

    trials: int
    base_seed: int = 0

    def estimate(self, graph: Graph, seeds: Iterable[int]) -> SpreadEstimate:
        return estimate_spread(graph, seeds, self.trials, self.base_seed)

    def spread(self, graph: Graph, seeds: Iterable[int]) -> float:
        return self.estimate(graph, seeds).mean

    def prefix_spreads(self, graph: Graph, order: Sequence[int]) -> np.ndarray:
        ests = mc_prefix_estimates(graph, order, self.trials, self.base_seed)
        return np.asarray([0.0] + [e.mean for e in ests], dtype=np.float64)


Evaluator = ExactEvaluator | MonteCarloEvaluator


def marginal_spread(graph: Graph, base: Iterable[int], v: int, evaluator: Evaluator) -> float:
    """Spread gain of adding v to base: I(base + v) - I(base).

    With a Monte-Carlo evaluator both terms reuse the same trial worlds,
    which keeps the difference low-variance.  v already in base gives 0.
    """
    if not (0 <= v < graph.node_count):
        raise ValueError(f"node id {v} out of range")
    base_set = set(check_seeds(graph, base))
    return evaluator.spread(graph, base_set | {v}) - evaluator.spread(graph, base_set)
