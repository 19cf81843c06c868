"""Influence maximization via self-consistent node rankings."""

from .diffusion import (
    ExactEvaluator,
    MonteCarloEvaluator,
    SpreadEstimate,
    estimate_spread,
    exact_prefix_spreads,
    exact_spread,
    marginal_spread,
    mc_prefix_estimates,
    simulate_cascade,
)
from .graph import (
    EdgeListError,
    Graph,
    assign_tic,
    assign_uniform,
    assign_wic,
    from_arcs,
    load_graph,
    parse_edge_list,
    save_graph,
    to_edge_list,
)
from .greedy import GreedyTrace, greedy_celf
from .lfa import (
    ConvergenceReport,
    MarginalScores,
    exact_marginal_score_fn,
    generalized_lfa_scores,
    imrank_iterate,
    influence_reach_prob,
    is_self_consistent,
    lfa_scores,
    ranking_marginals,
)
from .ranking import (
    Ranking,
    rank_degree,
    rank_inversed_degree,
    rank_pagerank,
    rank_random,
    rank_strength,
    ranking_from_scores,
)

__all__ = [
    "ConvergenceReport",
    "EdgeListError",
    "ExactEvaluator",
    "Graph",
    "GreedyTrace",
    "MarginalScores",
    "MonteCarloEvaluator",
    "Ranking",
    "SpreadEstimate",
    "assign_tic",
    "assign_uniform",
    "assign_wic",
    "estimate_spread",
    "exact_marginal_score_fn",
    "exact_prefix_spreads",
    "exact_spread",
    "from_arcs",
    "generalized_lfa_scores",
    "greedy_celf",
    "imrank_iterate",
    "influence_reach_prob",
    "is_self_consistent",
    "lfa_scores",
    "load_graph",
    "marginal_spread",
    "mc_prefix_estimates",
    "parse_edge_list",
    "rank_degree",
    "rank_inversed_degree",
    "rank_pagerank",
    "rank_random",
    "rank_strength",
    "ranking_from_scores",
    "ranking_marginals",
    "save_graph",
    "simulate_cascade",
    "to_edge_list",
]

__version__ = "0.1.0"
