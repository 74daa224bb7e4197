"""Ground truth by aggregation, plus an independent dense-matrix oracle.

The fast path merges the layers' sorted edge keys (OR = union, AND =
intersection) and runs the same hub / CC-node extraction used on single
layers. :func:`brute_force_check` recomputes everything from dense
adjacency matrices with exact fractions and reports disagreements.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._kernels import merge_intersection, merge_union
from .analysis import analyze_closeness
from .graph import GraphError, LayerGraph, MultilayerNetwork
from .thresholds import at_least_mean

DEFAULT_BOUND = 5000


def aggregate(x: LayerGraph, y: LayerGraph, op: str) -> LayerGraph:
    """Boolean OR (edge union) or AND (edge intersection) of two layers."""
    if x.n != y.n:
        raise GraphError(f"cannot aggregate layers with n={x.n} and n={y.n}")
    op = op.upper()
    if op == "OR":
        keys = merge_union(x.edge_keys(), y.edge_keys())
    elif op == "AND":
        keys = merge_intersection(x.edge_keys(), y.edge_keys())
    else:
        raise ValueError(f"unknown aggregation operator {op!r}")
    return LayerGraph.from_keys(x.n, keys)


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Exact result on the aggregated graph and the time it took.

    ``elapsed`` covers aggregation plus centrality extraction.
    """

    nodes: np.ndarray
    aggregated: LayerGraph
    elapsed: float
    avg_deg: float | None = None
    cc_value: np.ndarray | None = None
    sum_dist: np.ndarray | None = None


def ground_truth_degree_hubs(x: LayerGraph, y: LayerGraph) -> GroundTruth:
    t0 = time.perf_counter()
    agg = aggregate(x, y, "OR")
    deg = agg.degrees
    hubs = np.flatnonzero(at_least_mean(deg))
    elapsed = time.perf_counter() - t0
    avg = float(deg.sum()) / agg.n if agg.n else 0.0
    return GroundTruth(hubs, agg, elapsed, avg_deg=avg)


def ground_truth_cc_nodes(x: LayerGraph, y: LayerGraph, *, threads: int = 1) -> GroundTruth:
    t0 = time.perf_counter()
    agg = aggregate(x, y, "AND")
    s = analyze_closeness(agg, threads=threads)
    elapsed = time.perf_counter() - t0
    return GroundTruth(s.cc_nodes, agg, elapsed, cc_value=s.cc_value, sum_dist=s.sum_dist)


# -- dense-matrix oracle ---------------------------------------------------


def adjacency_matrix(g: LayerGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=bool)
    for u in range(g.n):
        a[u, g.neighbors(u)] = True
    return a


def matrix_distances(a: np.ndarray) -> np.ndarray:
    """All-pairs hop distances by repeated frontier expansion; -1 = unreachable."""
    n = a.shape[0]
    dist = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    reach = np.eye(n, dtype=bool)
    frontier = reach.copy()
    af = a.astype(np.float32)
    level = 0
    while frontier.any():
        level += 1
        frontier = ((frontier.astype(np.float32) @ af) > 0) & ~reach
        dist[frontier] = level
        reach |= frontier
    return dist


def matrix_hubs(a: np.ndarray) -> set[int]:
    n = a.shape[0]
    deg = [int(d) for d in a.sum(axis=1)]
    total = sum(deg)
    return {u for u in range(n) if deg[u] * n >= total}


def matrix_closeness(a: np.ndarray) -> list[Fraction]:
    """Wasserman-Faust closeness from the dense distance matrix, as fractions."""
    n = a.shape[0]
    dist = matrix_distances(a)
    values = []
    for u in range(n):
        row = dist[u]
        finite = row[row >= 0]
        r = finite.shape[0]
        s = int(finite.sum())
        if r <= 1 or s == 0:
            values.append(Fraction(0))
        else:
            values.append(Fraction((r - 1) ** 2, (n - 1) * s))
    return values


def matrix_cc_nodes(a: np.ndarray) -> set[int]:
    values = matrix_closeness(a)
    if not values:
        return set()
    mean = sum(values, Fraction(0)) / len(values)
    return {u for u, v in enumerate(values) if v >= mean}


def matrix_sum_dist(a: np.ndarray) -> list[int]:
    """Per-vertex distance sums with unreachable partners counted as ``n``."""
    n = a.shape[0]
    dist = matrix_distances(a)
    return [int(np.where(row >= 0, row, n).sum()) for row in dist]


@dataclass
class DiscrepancyReport:
    kind: str
    truth: set[int] = field(default_factory=set)
    fast: set[int] = field(default_factory=set)
    estimate: set[int] | None = None

    @property
    def fast_mismatch(self) -> set[int]:
        return self.truth ^ self.fast

    @property
    def missing(self) -> set[int]:
        """Ground-truth vertices absent from the estimate."""
        return set() if self.estimate is None else self.truth - self.estimate

    @property
    def extra(self) -> set[int]:
        return set() if self.estimate is None else self.estimate - self.truth

    @property
    def ok(self) -> bool:
        return not (self.fast_mismatch or self.missing or self.extra)

    def __bool__(self) -> bool:
        # truthy when there is something to report
        return not self.ok


def _as_set(result) -> set[int] | None:
    if result is None:
        return None
    for attr in ("hubs", "cc_nodes", "nodes"):
        if hasattr(result, attr):
            result = getattr(result, attr)
            break
    return {int(v) for v in np.asarray(result).ravel()}


def brute_force_check(
    mln: MultilayerNetwork, result=None, kind: str = "degree", *, bound: int = DEFAULT_BOUND
) -> DiscrepancyReport:
    """Compare the fast oracle, and optionally a heuristic result, to the matrix oracle.

    ``kind`` is ``degree`` (OR-aggregated hubs) or ``closeness``
    (AND-aggregated CC nodes).
    """
    if mln.n > bound:
        raise ValueError(f"n={mln.n} exceeds the brute-force bound {bound}")
    if len(mln) != 2:
        raise ValueError("brute-force check expects a two-layer network")
    x, y = mln.graphs
    ax, ay = adjacency_matrix(x), adjacency_matrix(y)
    if kind == "degree":
        truth = matrix_hubs(ax | ay)
        fast = ground_truth_degree_hubs(x, y).nodes
    elif kind == "closeness":
        truth = matrix_cc_nodes(ax & ay)
        fast = ground_truth_cc_nodes(x, y).nodes
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return DiscrepancyReport(kind, truth, _as_set(fast), _as_set(result))
