import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from imrank.diffusion import (
    ExactEvaluator,
    MonteCarloEvaluator,
    estimate_spread,
    exact_prefix_spreads,
    exact_spread,
    marginal_spread,
    mc_prefix_estimates,
    simulate_cascade,
)
from imrank.graph import assign_uniform, from_arcs
from imrank.rng import derive_key

from conftest import graph_strategy, random_instance


def spread_by_world_enumeration(graph, seeds):
    """Reference oracle: walk every live-edge world with python sets."""
    seeds = set(seeds)
    if not seeds:
        return 0.0
    arcs = list(graph.arcs())
    total = 0.0
    for world in itertools.product([0, 1], repeat=len(arcs)):
        pw = 1.0
        live = []
        for bit, (u, v, p) in zip(world, arcs):
            if bit:
                pw *= p
                live.append((u, v))
            else:
                pw *= 1.0 - p
        reached = set(seeds)
        frontier = list(seeds)
        while frontier:
            u = frontier.pop()
            for a, b in live:
                if a == u and b not in reached:
                    reached.add(b)
                    frontier.append(b)
        total += pw * len(reached)
    return total


class TestSimulateCascade:
    def test_all_nodes_seeded(self, g5):
        assert simulate_cascade(g5, set(range(5)), 1) == set(range(5))

    def test_zero_probability_stays_put(self, g5):
        g = assign_uniform(g5, 0.0)
        assert simulate_cascade(g, {3}, 7) == {3}

    def test_deterministic_chain(self):
        g = from_arcs(3, [(0, 1, 1.0), (1, 2, 1.0)])
        assert simulate_cascade(g, {0}, 99) == {0, 1, 2}

    def test_deterministic_in_trial_seed(self, g5):
        a = simulate_cascade(g5, {0, 1}, 4242)
        b = simulate_cascade(g5, {0, 1}, 4242)
        assert a == b

    def test_seed_out_of_range(self, g5):
        with pytest.raises(ValueError):
            simulate_cascade(g5, {9}, 1)

    def test_matches_estimate_trials(self, g5):
        # trial i of estimate_spread is reproducible via the derived key
        base = 77
        counts = [len(simulate_cascade(g5, {1}, derive_key(base, i))) for i in range(500)]
        est = estimate_spread(g5, {1}, 500, base)
        assert est.mean == sum(counts) / 500


class TestEstimateSpread:
    def test_zero_probability_exact(self, g5):
        g = assign_uniform(g5, 0.0)
        est = estimate_spread(g, {0, 2}, 1000, 3)
        assert est.mean == 2.0
        assert est.std_error == 0.0

    def test_two_node_closed_form(self):
        g = from_arcs(2, [(0, 1, 0.5)])
        est = estimate_spread(g, {0}, 100000, 11)
        assert est.std_error > 0
        assert abs(est.mean - 1.5) <= 3 * est.std_error

    def test_g5_single_seed_against_oracle(self, g5):
        est = estimate_spread(g5, {0}, 100000, 12)
        assert abs(est.mean - 1.24) <= 3 * est.std_error

    def test_trials_validation(self, g5):
        with pytest.raises(ValueError):
            estimate_spread(g5, {0}, 0, 1)

    def test_single_trial_has_zero_error(self, g5):
        est = estimate_spread(g5, {0}, 1, 5)
        assert est.trials == 1
        assert est.std_error == 0.0

    def test_bit_identical_reruns(self, g5):
        a = estimate_spread(g5, {0, 1}, 5000, 123)
        b = estimate_spread(g5, {0, 1}, 5000, 123)
        assert (a.mean, a.std_error) == (b.mean, b.std_error)

    @given(graph_strategy(max_nodes=6, max_arcs=8))
    @settings(max_examples=25)
    def test_mean_bounded_by_seed_count_and_n(self, graph):
        if graph.node_count < 2:
            return
        seeds = {0, graph.node_count - 1}
        est = estimate_spread(graph, seeds, 200, 9)
        assert len(seeds) <= est.mean <= graph.node_count


class TestExactSpread:
    def test_empty_seed_set(self, g5):
        assert exact_spread(g5, set()) == 0.0

    def test_two_node_half(self):
        g = from_arcs(2, [(0, 1, 0.5)])
        assert exact_spread(g, {0}) == pytest.approx(1.5, abs=1e-12)

    def test_g5_pair(self, g5):
        assert exact_spread(g5, {0, 1}) == pytest.approx(2.66912, abs=1e-9)

    def test_arc_cap_enforced(self):
        arcs = [(u, v, 0.5) for u in range(6) for v in range(6) if u != v][:26]
        g = from_arcs(6, arcs)
        with pytest.raises(ValueError, match="capped"):
            exact_spread(g, {0})

    def test_matches_reference_enumeration(self):
        for seed in range(25):
            g = random_instance(seed, max_nodes=5, max_arcs=8)
            nodes = list(range(g.node_count))
            seeds = set(nodes[:: 2])
            assert exact_spread(g, seeds) == pytest.approx(
                spread_by_world_enumeration(g, seeds), abs=1e-9
            )

    def test_prefix_spreads_telescope(self, g5):
        prefix = exact_prefix_spreads(g5, [0, 1, 2, 3, 4])
        assert prefix[0] == 0.0
        assert np.all(np.diff(prefix) >= -1e-12)
        assert prefix[-1] == pytest.approx(5.0, abs=1e-9)
        # each prefix agrees with a one-off evaluation
        for i in range(1, 6):
            assert prefix[i] == pytest.approx(exact_spread(g5, set(range(i))), abs=1e-9)

    def test_monotone_and_submodular_small(self):
        for seed in range(40):
            g = random_instance(seed + 1000, max_nodes=4, max_arcs=6)
            n = g.node_count
            table = {}
            for mask in range(1 << n):
                members = {i for i in range(n) if mask >> i & 1}
                table[mask] = exact_spread(g, members)
            for t_mask in range(1 << n):
                s_mask = t_mask
                while True:  # all submasks of t_mask
                    assert table[s_mask] <= table[t_mask] + 1e-9
                    for v in range(n):
                        bit = 1 << v
                        if not t_mask & bit:
                            gain_s = table[s_mask | bit] - table[s_mask]
                            gain_t = table[t_mask | bit] - table[t_mask]
                            assert gain_s >= gain_t - 1e-9
                    if s_mask == 0:
                        break
                    s_mask = (s_mask - 1) & t_mask


class TestMarginalSpread:
    def test_member_gains_nothing(self, g5):
        assert marginal_spread(g5, {0, 1}, 1, ExactEvaluator()) == 0.0
        assert marginal_spread(g5, {0, 1}, 1, MonteCarloEvaluator(2000, 5)) == 0.0

    def test_empty_base_equals_single_spread(self, g5):
        ev = ExactEvaluator()
        assert marginal_spread(g5, set(), 1, ev) == pytest.approx(
            exact_spread(g5, {1}), abs=1e-12
        )

    def test_g5_last_node(self, g5):
        assert marginal_spread(g5, {0, 1, 2, 3}, 4, ExactEvaluator()) == pytest.approx(
            0.64, abs=1e-9
        )

    def test_common_random_numbers_are_nonnegative(self, g5):
        # live-edge coupling makes every sampled marginal >= 0
        ev = MonteCarloEvaluator(trials=300, base_seed=17)
        for v in range(5):
            assert marginal_spread(g5, {0}, v, ev) >= 0.0

    def test_invalid_node(self, g5):
        with pytest.raises(ValueError):
            marginal_spread(g5, {0}, 99, ExactEvaluator())


class TestEstimatorConsistency:
    def test_estimate_matches_exact_within_four_sigma(self):
        hits = 0
        total = 0
        for seed in range(200):
            g = random_instance(seed + 2000, max_nodes=6, max_arcs=9)
            seeds = {0} if g.node_count else set()
            if not seeds:
                continue
            exact = exact_spread(g, seeds)
            est = estimate_spread(g, seeds, 3000, seed)
            total += 1
            slack = 4 * est.std_error if est.std_error else 1e-9
            if abs(est.mean - exact) <= slack:
                hits += 1
        assert hits / total >= 0.99

    def test_prefix_estimates_match_direct_estimates(self, g5):
        order = [3, 0, 4, 1, 2]
        ests = mc_prefix_estimates(g5, order, 4000, 21)
        for i, est in enumerate(ests, start=1):
            direct = estimate_spread(g5, set(order[:i]), 4000, 21)
            assert est.mean == direct.mean
            assert est.std_error == direct.std_error
