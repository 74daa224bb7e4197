"""Composition heuristics: combine two layer summaries into an MLN estimate.

Degree hubs of the OR-aggregated network:

* ``naive_or``: union of the layers' hub sets.
* ``dc_a1``: estimated degree ``max(deg_x, deg_y)``.
* ``dc_a2``: midpoint of ``max(deg_x, deg_y)`` and ``min(deg_x + deg_y, n - 1)``.
* ``dc_a2_with_info``: ``dc_a2`` with exact union degrees wherever both
  layers retained the vertex's neighbourhood.
* ``dc_p1`` / ``dc_p2``: layer hubs whose neighbourhood union reaches an
  estimated average degree (the larger layer average, or the mean of
  ``max(deg_x, deg_y)``).

CC nodes of the AND-aggregated network:

* ``naive_and_cc``: intersection of the layers' CC nodes.
* ``cc1``: common CC nodes plus overlapping central neighbours.
* ``cc2``: closeness from the estimated distance sum ``max(sum_x, sum_y)``.

Only summaries go in; no function here touches a graph.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._kernels import neighborhood_union_sizes
from .analysis import ClosenessSummary, DegreeSummary, Neighborhoods
from .thresholds import at_least_mean, at_least_mean_ratio


class CompositionError(ValueError):
    """Summaries are incompatible or lack the information a heuristic needs."""


class DegreeMethod(str, Enum):
    NAIVE_OR = "naive-or"
    DC_A1 = "dc-a1"
    DC_A2 = "dc-a2"
    DC_A2_INFO = "dc-a2-info"
    DC_P1 = "dc-p1"
    DC_P2 = "dc-p2"


class ClosenessMethod(str, Enum):
    NAIVE_AND = "naive-and"
    CC1 = "cc1"
    CC2 = "cc2"


@dataclass(frozen=True, eq=False)
class DegreeCompositionResult:
    method: DegreeMethod
    hubs: np.ndarray
    avg_est_deg: float | None = None
    est_deg: np.ndarray | None = None
    theta_time: float = 0.0
    params: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ClosenessCompositionResult:
    method: ClosenessMethod
    cc_nodes: np.ndarray
    est_sum_dist: np.ndarray | None = None
    deg_dist_ratio: tuple[np.ndarray, np.ndarray] | None = None
    avg_deg_dist_ratio: float | None = None
    theta_time: float = 0.0
    params: dict = field(default_factory=dict)


def _same_n(sx, sy) -> int:
    if sx.n != sy.n:
        raise CompositionError(f"summaries disagree on n ({sx.n} vs {sy.n})")
    return sx.n


def _need(summary, attr: str, method: str):
    value = getattr(summary, attr)
    if value is None:
        raise CompositionError(
            f"{method} needs {attr} from layer {summary.layer_name!r}; "
            "re-run the analysis with a retention policy that keeps it"
        )
    return value


def _union_sizes(a: Neighborhoods | None, b: Neighborhoods | None, n: int):
    empty = np.zeros(0, dtype=np.int64)
    va, pa, ia = (a.vertices, a.indptr, a.indices) if a is not None else (empty, np.zeros(1, np.int64), empty)
    vb, pb, ib = (b.vertices, b.indptr, b.indices) if b is not None else (empty, np.zeros(1, np.int64), empty)
    return neighborhood_union_sizes(va, pa, ia, vb, pb, ib, n)


# -- degree hubs, OR composition -------------------------------------------


def naive_or(sx: DegreeSummary, sy: DegreeSummary) -> DegreeCompositionResult:
    t0 = time.perf_counter()
    _same_n(sx, sy)
    hubs = np.union1d(sx.hubs, sy.hubs)
    return DegreeCompositionResult(DegreeMethod.NAIVE_OR, hubs, theta_time=time.perf_counter() - t0)


def dc_a1(sx: DegreeSummary, sy: DegreeSummary) -> DegreeCompositionResult:
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    est = np.maximum(sx.deg, sy.deg)
    hubs = np.flatnonzero(at_least_mean(est))
    avg = float(est.sum()) / n if n else 0.0
    return DegreeCompositionResult(
        DegreeMethod.DC_A1, hubs, avg, est, theta_time=time.perf_counter() - t0
    )


def _a2_doubled(sx: DegreeSummary, sy: DegreeSummary, n: int) -> np.ndarray:
    # twice the midpoint, so the estimate stays an exact integer
    lo = np.maximum(sx.deg, sy.deg)
    hi = np.minimum(sx.deg + sy.deg, max(n - 1, 0))
    return lo + hi


def dc_a2(sx: DegreeSummary, sy: DegreeSummary) -> DegreeCompositionResult:
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    doubled = _a2_doubled(sx, sy, n)
    hubs = np.flatnonzero(at_least_mean(doubled))
    avg = float(doubled.sum()) / (2 * n) if n else 0.0
    return DegreeCompositionResult(
        DegreeMethod.DC_A2, hubs, avg, doubled / 2, theta_time=time.perf_counter() - t0
    )


def dc_a2_with_info(sx: DegreeSummary, sy: DegreeSummary) -> DegreeCompositionResult:
    """DC-A2, but exact for vertices whose neighbourhoods both layers retained.

    Both summaries must come from the same retention fraction and seed, so
    they hold the same vertex subset. With fraction 1 the result is the
    exact OR-aggregated hub set.
    """
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    rx, ry = sx.retention, sy.retention
    if (rx.fraction, rx.seed) != (ry.fraction, ry.seed):
        raise CompositionError(
            f"retention mismatch: fraction/seed {rx.fraction}/{rx.seed} vs {ry.fraction}/{ry.seed}"
        )
    doubled = _a2_doubled(sx, sy, n)
    exact = np.zeros(0, dtype=np.int64)
    if rx.fraction > 0:
        nx_ = _need(sx, "full_neighborhoods", "dc-a2-info")
        ny_ = _need(sy, "full_neighborhoods", "dc-a2-info")
        exact = np.intersect1d(nx_.vertices, ny_.vertices, assume_unique=True)
        keys, sizes = _union_sizes(nx_, ny_, n)
        both = np.isin(keys, exact, assume_unique=True)
        doubled = doubled.copy()
        doubled[keys[both]] = 2 * sizes[both]
    hubs = np.flatnonzero(at_least_mean(doubled))
    avg = float(doubled.sum()) / (2 * n) if n else 0.0
    return DegreeCompositionResult(
        DegreeMethod.DC_A2_INFO,
        hubs,
        avg,
        doubled / 2,
        theta_time=time.perf_counter() - t0,
        params={"f": rx.fraction, "exact_vertices": int(exact.shape[0])},
    )


def _precision_hubs(sx, sy, n, threshold_sum: int) -> np.ndarray:
    # a hub of only one layer has no retained neighbourhood in the other
    hx = _need(sx, "hub_neighborhoods", "dc-p")
    hy = _need(sy, "hub_neighborhoods", "dc-p")
    keys, sizes = _union_sizes(hx, hy, n)
    # |NBD_x(u) | NBD_y(u)| >= threshold_sum / n
    return keys[sizes * n >= threshold_sum]


def dc_p1(sx: DegreeSummary, sy: DegreeSummary) -> DegreeCompositionResult:
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    top = max(sx.degree_sum, sy.degree_sum)
    hubs = _precision_hubs(sx, sy, n, top)
    avg = top / n if n else 0.0
    return DegreeCompositionResult(DegreeMethod.DC_P1, hubs, avg, theta_time=time.perf_counter() - t0)


def dc_p2(sx: DegreeSummary, sy: DegreeSummary) -> DegreeCompositionResult:
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    est = np.maximum(sx.deg, sy.deg)
    total = int(est.sum())
    hubs = _precision_hubs(sx, sy, n, total)
    avg = total / n if n else 0.0
    return DegreeCompositionResult(
        DegreeMethod.DC_P2, hubs, avg, est, theta_time=time.perf_counter() - t0
    )


# -- CC nodes, AND composition ---------------------------------------------


def naive_and_cc(sx: ClosenessSummary, sy: ClosenessSummary) -> ClosenessCompositionResult:
    t0 = time.perf_counter()
    _same_n(sx, sy)
    nodes = np.intersect1d(sx.cc_nodes, sy.cc_nodes)
    return ClosenessCompositionResult(ClosenessMethod.NAIVE_AND, nodes, theta_time=time.perf_counter() - t0)


def _mean_finite(a: np.ndarray) -> float:
    finite = a[np.isfinite(a)]
    return math.fsum(finite) / finite.shape[0] if finite.shape[0] else math.inf


def cc1(
    sx: ClosenessSummary,
    sy: ClosenessSummary,
    overlap_threshold: int = 2,
    include_common: bool = True,
) -> ClosenessCompositionResult:
    """Common CC nodes, plus their central neighbours when those overlap enough.

    With ``include_common=False`` a common CC node is kept only when its
    own overlap reaches ``overlap_threshold``.

    A neighbour is central in a layer when its distance-sum / AND-degree
    ratio is below the larger of the two layers' average ratios. Vertices
    with AND-degree bound 0 have an infinite ratio and are left out of the
    averages.
    """
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    if overlap_threshold < 1:
        raise ValueError("overlap_threshold must be >= 1")
    nbx = _need(sx, "cc_neighborhoods", "cc1")
    nby = _need(sy, "cc_neighborhoods", "cc1")
    min_deg = np.minimum(sx.deg, sy.deg)
    with np.errstate(divide="ignore"):
        ratio_x = np.where(min_deg > 0, sx.sum_dist / np.maximum(min_deg, 1), np.inf)
        ratio_y = np.where(min_deg > 0, sy.sum_dist / np.maximum(min_deg, 1), np.inf)
    avg = max(_mean_finite(ratio_x), _mean_finite(ratio_y))
    central_x = ratio_x < avg
    central_y = ratio_y < avg

    chosen = np.zeros(n, dtype=bool)
    for u in np.intersect1d(sx.cc_nodes, sy.cc_nodes).tolist():
        cand_x = nbx[u][central_x[nbx[u]]]
        cand_y = nby[u][central_y[nby[u]]]
        overlap = np.intersect1d(cand_x, cand_y, assume_unique=True)
        if overlap.shape[0] >= overlap_threshold:
            chosen[overlap] = True
            chosen[u] = True
        elif include_common:
            chosen[u] = True
    return ClosenessCompositionResult(
        ClosenessMethod.CC1,
        np.flatnonzero(chosen),
        deg_dist_ratio=(ratio_x, ratio_y),
        avg_deg_dist_ratio=avg,
        theta_time=time.perf_counter() - t0,
        params={"overlap_threshold": overlap_threshold, "include_common": include_common},
    )


def cc2(
    sx: ClosenessSummary,
    sy: ClosenessSummary,
    selection: str = "above-average",
    k: int | None = None,
) -> ClosenessCompositionResult:
    """Closeness ``(n - 1) / max(sum_x, sum_y)`` per vertex, then select.

    ``selection`` is ``above-average`` (value >= mean) or ``top-k`` (the
    ``k`` largest values, ties broken by vertex id).
    """
    t0 = time.perf_counter()
    n = _same_n(sx, sy)
    est = np.maximum(sx.sum_dist, sy.sum_dist)
    if selection == "above-average":
        if n < 2:
            nodes = np.arange(n)
        else:
            nodes = np.flatnonzero(at_least_mean_ratio(np.full(n, n - 1), est))
    elif selection == "top-k":
        if k is None or k < 0:
            raise ValueError("top-k selection needs k >= 0")
        nodes = np.sort(np.argsort(est, kind="stable")[:k])
    else:
        raise ValueError(f"unknown selection {selection!r}")
    return ClosenessCompositionResult(
        ClosenessMethod.CC2,
        nodes,
        est_sum_dist=est,
        theta_time=time.perf_counter() - t0,
        params={"selection": selection, **({"k": k} if selection == "top-k" else {})},
    )


DEGREE_METHODS = {
    DegreeMethod.NAIVE_OR: naive_or,
    DegreeMethod.DC_A1: dc_a1,
    DegreeMethod.DC_A2: dc_a2,
    DegreeMethod.DC_A2_INFO: dc_a2_with_info,
    DegreeMethod.DC_P1: dc_p1,
    DegreeMethod.DC_P2: dc_p2,
}

CLOSENESS_METHODS = {
    ClosenessMethod.NAIVE_AND: naive_and_cc,
    ClosenessMethod.CC1: cc1,
    ClosenessMethod.CC2: cc2,
}

_ALIASES = {"naive": None, "a1": "dc-a1", "a2": "dc-a2", "p1": "dc-p1", "p2": "dc-p2"}


def resolve_method(name: str, kind: str) -> DegreeMethod | ClosenessMethod:
    """Map a user-facing method name to its enum, checking it fits ``kind``."""
    key = name.strip().lower().replace("_", "-")
    if key == "naive":
        key = "naive-or" if kind == "degree" else "naive-and"
    key = _ALIASES.get(key) or key
    for enum, k in ((DegreeMethod, "degree"), (ClosenessMethod, "closeness")):
        try:
            method = enum(key)
        except ValueError:
            continue
        if k != kind:
            raise CompositionError(f"method {name!r} is a {k} heuristic, not usable with kind={kind}")
        return method
    raise CompositionError(f"unknown method {name!r}")


def compose(method: DegreeMethod | ClosenessMethod, sx, sy, **params):
    if isinstance(method, DegreeMethod):
        if not (isinstance(sx, DegreeSummary) and isinstance(sy, DegreeSummary)):
            raise CompositionError(f"{method.value} needs degree summaries")
        return DEGREE_METHODS[method](sx, sy, **params)
    if not (isinstance(sx, ClosenessSummary) and isinstance(sy, ClosenessSummary)):
        raise CompositionError(f"{method.value} needs closeness summaries")
    return CLOSENESS_METHODS[method](sx, sy, **params)
