"""Batch experiment driver.

Subcommands:

* `run`   — load a graph, assign a cascade model, run one algorithm, and
            evaluate its top-k seed sets for every requested k.
* `eval`  — Monte-Carlo spread of an explicit seed file.
* `bench` — run several algorithms under one evaluation seed and emit a
            flat CSV for plotting.

Flag values override config-file values, which override defaults.  All
randomness is seeded, so identical configs reproduce identical algorithmic
output; wall-clock timings are reported under separate keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field

from .diffusion import ExactEvaluator, MonteCarloEvaluator, estimate_spread
from .graph import Graph, assign_tic, assign_uniform, assign_wic, parse_edge_list
from .greedy import greedy_celf
from .lfa import imrank_iterate
from .ranking import (
    Ranking,
    rank_degree,
    rank_inversed_degree,
    rank_pagerank,
    rank_random,
    rank_strength,
    read_node_list,
)
from .rng import derive_key

EXIT_CONFIG = 2
EXIT_RUNTIME = 3

RANKERS = {
    "degree": rank_degree,
    "inversed-degree": rank_inversed_degree,
    "strength": rank_strength,
    "pagerank": rank_pagerank,
}


class ConfigError(Exception):
    def __init__(self, fld: str, message: str):
        super().__init__(f"field {fld!r}: {message}")
        self.field = fld


@dataclass
class ExperimentConfig:
    graph: str
    model: str
    algos: list[str]
    directed: bool = True
    init: str = "degree"
    l: int = 1
    theta: float = 0.0
    max_iter: int = 10
    k: list[int] = field(default_factory=lambda: [1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50])
    trials: int = 10000
    eval_seed: int = 0
    out: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if not self.graph:
            raise ConfigError("graph", "a graph path is required")
        if not self.algos:
            raise ConfigError("algo", "at least one algorithm is required")
        if not self.k:
            raise ConfigError("k", "k list must not be empty")
        if any(v < 1 for v in self.k) or self.k != sorted(self.k):
            raise ConfigError("k", "k list must be positive and ascending")
        if len(set(self.k)) != len(self.k):
            raise ConfigError("k", "k list must not repeat values")
        if self.trials < 1:
            raise ConfigError("trials", "trials must be >= 1")
        if self.l < 1:
            raise ConfigError("l", "path depth must be >= 1")
        if not (0.0 <= self.theta < 1.0):
            raise ConfigError("theta", "threshold must be in [0, 1)")
        if self.max_iter < 1:
            raise ConfigError("max-iter", "max iterations must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError("format", "format must be json or csv")
        parse_model(self.model)  # raises ConfigError on a bad token
        for a in self.algos:
            parse_algo_token(a)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "directed": self.directed,
            "model": self.model,
            "algos": self.algos,
            "init": self.init,
            "l": self.l,
            "theta": self.theta,
            "max_iter": self.max_iter,
            "k": self.k,
            "trials": self.trials,
            "eval_seed": self.eval_seed,
            "out": self.out,
            "format": self.format,
        }


def parse_model(token: str):
    """Model token -> callable(Graph) -> Graph."""
    name, _, arg = token.partition(":")
    if name == "wic":
        return assign_wic
    if name == "tic":
        try:
            seed = int(arg)
        except ValueError:
            raise ConfigError("model", f"tic needs an integer seed, got {arg!r}") from None
        return lambda g: assign_tic(g, seed)
    if name == "uniform":
        try:
            p = float(arg)
        except ValueError:
            raise ConfigError("model", f"uniform needs a probability, got {arg!r}") from None
        if not (0.0 <= p <= 1.0):
            raise ConfigError("model", f"probability {p} outside [0, 1]")
        return lambda g: assign_uniform(g, p)
    if name == "file":
        def passthrough(g: Graph) -> Graph:
            if g.missing_p:
                raise ConfigError("model", f"{g.missing_p} arcs lack probabilities; use wic/tic/uniform")
            return g
        return passthrough
    raise ConfigError("model", f"unknown model {token!r}")


def parse_algo_token(token: str) -> tuple[str, dict]:
    """Algorithm token -> (name, params)."""
    parts = token.split(":")
    name = parts[0]
    if name in RANKERS and len(parts) == 1:
        return name, {}
    if name == "random":
        if len(parts) != 2:
            raise ConfigError("algo", "random needs a seed: random:SEED")
        try:
            return "random", {"seed": int(parts[1])}
        except ValueError:
            raise ConfigError("algo", f"random seed must be an integer, got {parts[1]!r}") from None
    if name == "imrank":
        if len(parts) == 1:
            return "imrank", {}
        if len(parts) == 2:  # imrank:L pins the path depth (bench comparisons)
            try:
                depth = int(parts[1])
            except ValueError:
                raise ConfigError("algo", f"imrank depth must be an integer, got {parts[1]!r}") from None
            if depth < 1:
                raise ConfigError("algo", "imrank depth must be >= 1")
            return "imrank", {"l": depth}
        raise ConfigError("algo", f"unknown imrank form {token!r}")
    if name == "greedy":
        if len(parts) == 1 or parts[1] == "mc":
            trials = 1000
            if len(parts) == 3:
                try:
                    trials = int(parts[2])
                except ValueError:
                    raise ConfigError("algo", f"greedy trials must be an integer, got {parts[2]!r}") from None
            return "greedy", {"mode": "mc", "trials": trials}
        if parts[1] == "exact" and len(parts) == 2:
            return "greedy", {"mode": "exact"}
        raise ConfigError("algo", f"unknown greedy form {token!r}")
    raise ConfigError("algo", f"unknown algorithm {token!r}")


def make_initial_ranking(graph: Graph, token: str) -> Ranking:
    name, _, arg = token.partition(":")
    if name in RANKERS:
        return RANKERS[name](graph)
    if name == "random":
        try:
            return rank_random(graph, int(arg))
        except ValueError:
            raise ConfigError("init", f"random needs an integer seed, got {arg!r}") from None
    raise ConfigError("init", f"unknown initial ranking {token!r}")


def run_algorithm(graph: Graph, token: str, config: ExperimentConfig) -> dict:
    """Run one algorithm; returns seed order plus optional trace objects."""
    name, params = parse_algo_token(token)
    k_max = max(config.k)
    if k_max > graph.node_count:
        raise ConfigError("k", f"largest k {k_max} exceeds node count {graph.node_count}")
    result: dict = {"algorithm": token}
    t0 = time.perf_counter()
    if name in RANKERS:
        ranking = RANKERS[name](graph)
        result["order"] = ranking.top(graph.node_count)
        result["timing"] = {"algorithm": time.perf_counter() - t0}
    elif name == "random":
        ranking = rank_random(graph, params["seed"])
        result["order"] = ranking.top(graph.node_count)
        result["timing"] = {"algorithm": time.perf_counter() - t0}
    elif name == "imrank":
        initial = make_initial_ranking(graph, config.init)
        t1 = time.perf_counter()
        final, report = imrank_iterate(
            graph,
            initial,
            k=k_max,
            max_hops=params.get("l", config.l),
            prune_threshold=config.theta,
            max_iterations=config.max_iter,
        )
        t2 = time.perf_counter()
        result["order"] = final.top(graph.node_count)
        result["convergence"] = report.to_dict()
        result["timing"] = {"init_ranking": t1 - t0, "algorithm": t2 - t1}
    else:  # greedy
        if params["mode"] == "exact":
            evaluator = ExactEvaluator()
        else:
            evaluator = MonteCarloEvaluator(trials=params["trials"], base_seed=derive_key(config.eval_seed, 1))
        trace = greedy_celf(graph, k_max, evaluator)
        result["order"] = trace.seeds_in_order
        result["greedy_trace"] = trace.to_dict()
        result["timing"] = {"algorithm": time.perf_counter() - t0}
    return result


def evaluate_prefixes(graph: Graph, order: list[int], config: ExperimentConfig) -> list[dict]:
    rows = []
    for k in config.k:
        t0 = time.perf_counter()
        est = estimate_spread(graph, order[:k], config.trials, config.eval_seed)
        rows.append(
            {
                "k": k,
                "spread": est.mean,
                "std_error": est.std_error,
                "seconds": time.perf_counter() - t0,
            }
        )
    return rows


def load_model_graph(config: ExperimentConfig) -> Graph:
    try:
        with open(config.graph, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        raise RuntimeError(f"cannot read graph file: {exc}") from None
    graph = parse_edge_list(text, directed=config.directed)
    return parse_model(config.model)(graph)


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    return buf.getvalue()


def cmd_run(config: ExperimentConfig) -> dict:
    config.validate()
    if len(config.algos) != 1:
        raise ConfigError("algo", "run takes exactly one algorithm")
    t0 = time.perf_counter()
    graph = load_model_graph(config)
    t_load = time.perf_counter() - t0
    algo = run_algorithm(graph, config.algos[0], config)
    t1 = time.perf_counter()
    per_k = evaluate_prefixes(graph, algo["order"], config)
    t_eval = time.perf_counter() - t1
    timings = {"load": t_load, "evaluation": t_eval, **algo.pop("timing")}
    result = {
        "config": config.to_dict(),
        **algo,
        "order_labels": [graph.labels[v] for v in algo["order"]],
        "per_k": per_k,
        "timings": timings,
    }
    _write_run_outputs(result, config)
    return result


def _write_run_outputs(result: dict, config: ExperimentConfig) -> None:
    csv_text = rows_to_csv(result["per_k"], ["k", "spread", "std_error", "seconds"])
    if config.out:
        with open(config.out, "w") as fh:
            json.dump(result, fh, indent=2)
            fh.write("\n")
        csv_path = config.out[:-5] + ".csv" if config.out.endswith(".json") else config.out + ".csv"
        with open(csv_path, "w") as fh:
            fh.write(csv_text)
    elif config.format == "csv":
        sys.stdout.write(csv_text)
    else:
        json.dump(result, sys.stdout, indent=2)
        sys.stdout.write("\n")


def cmd_eval(config: ExperimentConfig, seeds_path: str) -> dict:
    config.validate()
    graph = load_model_graph(config)
    seeds = read_node_list(seeds_path, graph)
    est = estimate_spread(graph, seeds, config.trials, config.eval_seed)
    result = {
        "seeds": [graph.labels[v] for v in seeds],
        "mean": est.mean,
        "std_error": est.std_error,
        "trials": est.trials,
        "base_seed": est.base_seed,
    }
    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return result


def cmd_bench(config: ExperimentConfig) -> list[dict]:
    config.validate()
    graph = load_model_graph(config)
    rows = []
    for token in config.algos:
        t0 = time.perf_counter()
        algo = run_algorithm(graph, token, config)
        seconds = time.perf_counter() - t0
        for entry in evaluate_prefixes(graph, algo["order"], config):
            rows.append(
                {
                    "algorithm": token,
                    "k": entry["k"],
                    "spread": entry["spread"],
                    "std_error": entry["std_error"],
                    "seconds": seconds,
                }
            )
    columns = ["algorithm", "k", "spread", "std_error", "seconds"]
    if config.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = rows_to_csv(rows, columns)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imrank", description="Influence maximization experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run one algorithm and evaluate its top-k seed sets"),
        ("eval", "estimate the spread of an explicit seed file"),
        ("bench", "compare several algorithms under one evaluation seed"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--graph", help="edge list path")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--directed", dest="directed", action="store_true", default=None)
        group.add_argument("--undirected", dest="directed", action="store_false", default=None)
        p.add_argument("--model", help="wic | tic:SEED | uniform:P | file")
        p.add_argument(
            "--algo",
            action="append",
            help="imrank[:DEPTH] | greedy[:exact|:mc:TRIALS] | degree | inversed-degree | "
            "strength | pagerank | random:SEED (repeatable for bench)",
        )
        p.add_argument("--init", help="imrank initial ranking (default degree)")
        p.add_argument("--l", type=int, help="influence path depth (default 1)")
        p.add_argument("--theta", type=float, help="path pruning threshold (default 0)")
        p.add_argument("--max-iter", type=int, help="iteration cap (default 10)")
        p.add_argument("--k", help="comma-separated ascending k list")
        p.add_argument("--trials", type=int, help="evaluation trials (default 10000)")
        p.add_argument("--eval-seed", type=int, help="evaluation seed (default 0)")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=("json", "csv"), help="stdout format")
        if name == "eval":
            p.add_argument("--seeds", required=True, help="file of node labels, one per line")
    return parser


def _merge_config(args: argparse.Namespace) -> ExperimentConfig:
    file_values: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot load config file: {exc}") from None
        if not isinstance(file_values, dict):
            raise ConfigError("config", "config file must hold a JSON object")

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return file_values[key]
        return default

    k_value = pick(args.k, "k", "1,5,10,15,20,25,30,35,40,45,50")
    if isinstance(k_value, str):
        try:
            k_list = [int(tok) for tok in k_value.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError("k", f"k list must be integers, got {k_value!r}") from None
    else:
        k_list = [int(v) for v in k_value]
    algos = args.algo if args.algo else file_values.get("algos") or file_values.get("algo")
    if isinstance(algos, str):
        algos = [algos]
    return ExperimentConfig(
        graph=pick(args.graph, "graph", None),
        directed=bool(pick(args.directed, "directed", True)),
        model=pick(args.model, "model", "file"),
        algos=list(algos or []),
        init=pick(args.init, "init", "degree"),
        l=int(pick(args.l, "l", 1)),
        theta=float(pick(args.theta, "theta", 0.0)),
        max_iter=int(pick(args.max_iter, "max_iter", 10)),
        k=k_list,
        trials=int(pick(args.trials, "trials", 10000)),
        eval_seed=int(pick(args.eval_seed, "eval_seed", 0)),
        out=pick(args.out, "out", None),
        format=pick(args.format, "format", "csv" if args.command == "bench" else "json"),
    )


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _merge_config(args)
        if args.command == "run":
            cmd_run(config)
        elif args.command == "eval":
            config.algos = config.algos or ["degree"]  # unused by eval
            cmd_eval(config, args.seeds)
        else:
            cmd_bench(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
