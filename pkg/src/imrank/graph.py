"""Directed probabilistic influence networks.

A `Graph` is an immutable directed graph over dense node ids 0..n-1 with a
propagation probability on every arc.  Arcs keep their load order (the
trivalency model and the cascade coin streams are keyed by it), and both
adjacency directions are exposed through CSR-style numpy arrays.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .rng import mix64_array

TIC_LEVELS = (0.1, 0.01, 0.001)
_U64 = (1 << 64) - 1


class EdgeListError(ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed graph with per-arc propagation probabilities.

    `arc_src/arc_dst/arc_p` hold the arcs in load order.  `labels` maps the
    dense node id back to the external label.  `model` records how the
    probabilities were assigned (for the JSON sidecar); `missing_p` counts
    arcs whose probability is still the parse placeholder and must be
    overwritten by a model assigner before any algorithm runs.
    """

    node_count: int
    directed: bool
    arc_src: np.ndarray
    arc_dst: np.ndarray
    arc_p: np.ndarray
    labels: tuple[str, ...]
    model: dict | None = None
    missing_p: int = 0
    # CSR adjacency, derived in __post_init__
    out_ptr: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    out_dst: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    out_p: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    out_arc: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    in_ptr: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    in_src: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    in_p: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        n = self.node_count
        src, dst = self.arc_src, self.arc_dst
        order_out = np.argsort(src, kind="stable")
        order_in = np.argsort(dst, kind="stable")
        set_ = object.__setattr__
        set_(self, "out_ptr", np.searchsorted(src[order_out], np.arange(n + 1)))
        set_(self, "out_dst", dst[order_out])
        set_(self, "out_p", self.arc_p[order_out])
        set_(self, "out_arc", order_out.astype(np.int64))
        set_(self, "in_ptr", np.searchsorted(dst[order_in], np.arange(n + 1)))
        set_(self, "in_src", src[order_in])
        set_(self, "in_p", self.arc_p[order_in])

    @property
    def arc_count(self) -> int:
        return len(self.arc_src)

    def out_edges(self, u: int) -> Iterator[tuple[int, float]]:
        """Yield (target, probability) for every arc leaving u."""
        lo, hi = self.out_ptr[u], self.out_ptr[u + 1]
        for i in range(lo, hi):
            yield int(self.out_dst[i]), float(self.out_p[i])

    def in_edges(self, v: int) -> Iterator[tuple[int, float]]:
        """Yield (source, probability) for every arc entering v."""
        lo, hi = self.in_ptr[v], self.in_ptr[v + 1]
        for i in range(lo, hi):
            yield int(self.in_src[i]), float(self.in_p[i])

    def out_degree(self, u: int) -> int:
        return int(self.out_ptr[u + 1] - self.out_ptr[u])

    def in_degree(self, v: int) -> int:
        return int(self.in_ptr[v + 1] - self.in_ptr[v])

    def arcs(self) -> Iterator[tuple[int, int, float]]:
        """All arcs in load order."""
        for u, v, p in zip(self.arc_src, self.arc_dst, self.arc_p):
            yield int(u), int(v), float(p)

    def label_to_id(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}


def from_arcs(
    node_count: int,
    arcs: Sequence[tuple[int, int, float]],
    directed: bool = True,
    labels: Sequence[str] | None = None,
    model: dict | None = None,
    missing_p: int = 0,
) -> Graph:
    """Build a validated Graph from (src, dst, p) triples in load order."""
    if labels is None:
        labels = tuple(str(i) for i in range(node_count))
    else:
        labels = tuple(labels)
        if len(labels) != node_count:
            raise ValueError("labels length must equal node_count")
    src = np.asarray([a[0] for a in arcs], dtype=np.int64)
    dst = np.asarray([a[1] for a in arcs], dtype=np.int64)
    p = np.asarray([a[2] for a in arcs], dtype=np.float64)
    if len(src) > 0:
        if src.min() < 0 or src.max() >= node_count or dst.min() < 0 or dst.max() >= node_count:
            raise ValueError("arc endpoint out of range")
        if np.any(src == dst):
            raise ValueError("self-loops are not allowed")
        if not np.all((p >= 0.0) & (p <= 1.0)):
            raise ValueError("probability outside [0, 1]")
        seen = set(zip(src.tolist(), dst.tolist()))
        if len(seen) != len(src):
            raise ValueError("duplicate arc")
    return Graph(node_count, directed, src, dst, p, labels, model, missing_p)


def parse_edge_list(text: str | bytes, directed: bool = True) -> Graph:
    """Parse whitespace-separated "u v" or "u v p" lines into a Graph.

    '#' starts a comment line; blank lines are skipped.  External labels are
    remapped to dense ids in first-appearance order.  Lines without p get the
    placeholder 0.0 and are counted in `missing_p`; a model assigner must
    overwrite them before use.  With directed=False every line emits both
    arcs.  Malformed lines raise EdgeListError with their line number.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    ids: dict[str, int] = {}
    arcs: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    missing = 0

    def node_id(label: str) -> int:
        if label not in ids:
            ids[label] = len(ids)
        return ids[label]

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise EdgeListError(line_no, f"expected 2 or 3 tokens, got {len(tokens)}")
        u_lab, v_lab = tokens[0], tokens[1]
        if len(tokens) == 3:
            try:
                p = float(tokens[2])
            except ValueError:
                raise EdgeListError(line_no, f"non-numeric probability {tokens[2]!r}") from None
            if not (0.0 <= p <= 1.0):
                raise EdgeListError(line_no, f"probability {p} outside [0, 1]")
        else:
            p = 0.0
        u, v = node_id(u_lab), node_id(v_lab)
        if u == v:
            raise EdgeListError(line_no, f"self-loop at node {u_lab!r}")
        pairs = [(u, v)] if directed else [(u, v), (v, u)]
        for a, b in pairs:
            if (a, b) in seen:
                raise EdgeListError(line_no, f"duplicate arc {u_lab!r} -> {v_lab!r}")
            seen.add((a, b))
            arcs.append((a, b, p))
            if len(tokens) == 2:
                missing += 1

    n = len(ids)
    labels = tuple(ids.keys())
    return from_arcs(n, arcs, directed=directed, labels=labels, missing_p=missing)


def _with_probabilities(graph: Graph, p: np.ndarray, model: dict) -> Graph:
    return Graph(
        graph.node_count,
        graph.directed,
        graph.arc_src,
        graph.arc_dst,
        p,
        graph.labels,
        model,
        missing_p=0,
    )


def assign_wic(graph: Graph) -> Graph:
    """Weighted cascade: every arc (u, v) gets probability 1 / indegree(v)."""
    indeg = np.diff(graph.in_ptr).astype(np.float64)
    p = 1.0 / indeg[graph.arc_dst]
    return _with_probabilities(graph, p, {"name": "wic"})


def assign_tic(graph: Graph, seed: int) -> Graph:
    """Trivalency cascade: each arc draws uniformly from {0.1, 0.01, 0.001}.

    The draw for arc i is a pure function of (seed, i) with i the load-order
    index, so assignment is reproducible and order-independent.  On expanded
    undirected inputs the two directions draw independently.
    """
    keys = mix64_array(np.uint64(seed & _U64) ^ mix64_array(np.arange(graph.arc_count, dtype=np.uint64)))
    u = (keys >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
    idx = np.minimum((u * 3.0).astype(np.int64), 2)
    p = np.asarray(TIC_LEVELS, dtype=np.float64)[idx]
    return _with_probabilities(graph, p, {"name": "tic", "seed": seed, "draws": "per-arc"})


def assign_uniform(graph: Graph, p: float) -> Graph:
    """Uniform cascade: every arc gets probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"probability {p} outside [0, 1]")
    probs = np.full(graph.arc_count, float(p), dtype=np.float64)
    return _with_probabilities(graph, probs, {"name": "uniform", "p": p})


def to_edge_list(graph: Graph) -> str:
    """Serialize arcs (load order) as "label label p" lines.

    Probabilities use Python's shortest round-trip repr, so parsing the text
    back reproduces them bit for bit.
    """
    lines = []
    for u, v, p in graph.arcs():
        lines.append(f"{graph.labels[u]} {graph.labels[v]} {p!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def sidecar_metadata(graph: Graph) -> dict:
    """JSON header describing a serialized graph, for bit-for-bit reruns."""
    model = graph.model or {"name": "none"}
    return {
        "node_count": graph.node_count,
        "arc_count": graph.arc_count,
        "directed": True,  # serialized text always lists explicit arcs
        "source_directed": graph.directed,
        "model": model,
    }


def save_graph(graph: Graph, path: str | Path) -> None:
    """Write the edge list to `path` and a JSON sidecar to `path + '.json'`."""
    path = Path(path)
    path.write_text(to_edge_list(graph))
    sidecar = Path(str(path) + ".json")
    sidecar.write_text(json.dumps(sidecar_metadata(graph), indent=2) + "\n")


def load_graph(path: str | Path, directed: bool = True) -> Graph:
    """Load an edge list; if a sidecar exists its directed flag wins."""
    path = Path(path)
    sidecar = Path(str(path) + ".json")
    model = None
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        directed = bool(meta.get("directed", directed))
        model = meta.get("model")
    graph = parse_edge_list(path.read_text(), directed=directed)
    if model is not None and graph.missing_p == 0:
        graph = dataclasses.replace(graph, model=model)
    return graph


def check_seeds(graph: Graph, seeds: Iterable[int]) -> list[int]:
    """Validate seed ids and return them as a sorted duplicate-free list."""
    out = sorted(set(int(s) for s in seeds))
    if out and (out[0] < 0 or out[-1] >= graph.node_count):
        raise ValueError(f"seed id out of range 0..{graph.node_count - 1}")
    return out
