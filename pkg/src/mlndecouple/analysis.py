"""Per-layer analysis: the summaries each composition heuristic consumes.

Every layer is analyzed on its own, without looking at any other layer.
Degree summaries hold degrees, the average degree and the hub set, plus
optional one-hop neighbourhoods. Closeness summaries hold sums of
shortest-path distances (unreachable pairs cost ``n``), Wasserman-Faust
closeness values, component sizes, CC nodes and their neighbourhoods.
"""

from __future__ import annotations

import json
import math
import time
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from ._kernels import bfs_distance_sums
from .graph import LayerGraph, MultilayerNetwork
from .thresholds import at_least_mean, at_least_mean_ratio

ARTIFACT_VERSION = 1


class LayerAnalysisError(RuntimeError):
    def __init__(self, layer: str, cause: BaseException):
        super().__init__(f"layer {layer!r}: {cause}")
        self.layer = layer


def _ro(a, dtype=np.int64) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class Neighborhoods(Mapping):
    """Read-only map ``vertex -> sorted neighbour array`` stored as CSR rows."""

    def __init__(self, vertices: np.ndarray, indptr: np.ndarray, indices: np.ndarray):
        self.vertices = _ro(vertices)
        self.indptr = _ro(indptr)
        self.indices = _ro(indices)
        if self.indptr.shape != (self.vertices.shape[0] + 1,):
            raise ValueError("indptr does not match the key count")

    @classmethod
    def of(cls, g: LayerGraph, vertices) -> "Neighborhoods":
        vertices = np.unique(np.asarray(vertices, dtype=np.int64))
        degs = g.indptr[vertices + 1] - g.indptr[vertices]
        indptr = np.zeros(vertices.shape[0] + 1, dtype=np.int64)
        np.cumsum(degs, out=indptr[1:])
        pos = np.repeat(g.indptr[vertices] - indptr[:-1], degs) + np.arange(indptr[-1])
        return cls(vertices, indptr, g.indices[pos])

    def _slot(self, u: int) -> int:
        i = int(np.searchsorted(self.vertices, u))
        if i == self.vertices.shape[0] or self.vertices[i] != u:
            raise KeyError(u)
        return i

    def __getitem__(self, u: int) -> np.ndarray:
        i = self._slot(u)
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def __contains__(self, u) -> bool:
        try:
            self._slot(u)
        except (KeyError, TypeError):
            return False
        return True

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices.tolist())

    def __len__(self) -> int:
        return int(self.vertices.shape[0])

    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def __repr__(self) -> str:
        return f"Neighborhoods({len(self)} vertices, {self.indices.shape[0]} entries)"


@dataclass(frozen=True)
class Retention:
    """Which one-hop neighbourhoods a degree analysis keeps.

    ``hubs`` keeps the neighbourhood of every hub. ``fraction`` keeps the
    neighbourhoods of a seeded uniform random subset of ``ceil(f * n)``
    vertices; subsets drawn with one seed are nested as ``f`` grows.
    """

    hubs: bool = False
    fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must lie in [0, 1], got {self.fraction}")

    @classmethod
    def parse(cls, spec: "str | float | Retention", seed: int = 0) -> "Retention":
        """Accepts ``none``, ``hubs``, ``all``, a fraction, or ``hubs+<fraction>``."""
        if isinstance(spec, Retention):
            return spec
        if isinstance(spec, (int, float)):
            return cls(False, float(spec), seed)
        hubs, fraction = False, 0.0
        for part in str(spec).lower().replace("-only", "").split("+"):
            part = part.strip()
            if part == "none":
                continue
            elif part == "hubs":
                hubs = True
            elif part == "all":
                hubs, fraction = True, 1.0
            else:
                try:
                    fraction = float(part)
                except ValueError:
                    raise ValueError(f"unknown retention policy {spec!r}") from None
        return cls(hubs, fraction, seed)

    def __str__(self) -> str:
        if self.hubs and self.fraction == 1.0:
            return "all"
        parts = (["hubs"] if self.hubs else []) + ([f"{self.fraction:g}"] if self.fraction else [])
        return "+".join(parts) or "none"


def retained_subset(n: int, fraction: float, seed: int) -> np.ndarray:
    k = min(n, math.ceil(fraction * n - 1e-9))
    order = np.random.default_rng(seed).permutation(n)
    return np.sort(order[:k])


@dataclass(frozen=True, eq=False)
class DegreeSummary:
    layer_name: str
    n: int
    deg: np.ndarray
    avg_deg: float
    hubs: np.ndarray
    hub_neighborhoods: Neighborhoods | None = None
    full_neighborhoods: Neighborhoods | None = None
    retention: Retention = Retention()
    psi_time: float = 0.0

    @property
    def degree_sum(self) -> int:
        return int(self.deg.sum())


@dataclass(frozen=True, eq=False)
class ClosenessSummary:
    layer_name: str
    n: int
    deg: np.ndarray
    sum_dist: np.ndarray
    cc_value: np.ndarray
    component_size: np.ndarray
    cc_nodes: np.ndarray
    cc_neighborhoods: Neighborhoods | None = None
    psi_time: float = 0.0


def analyze_degree(
    g: LayerGraph,
    retain: str | float | Retention = "none",
    *,
    seed: int = 0,
    layer_name: str = "",
) -> DegreeSummary:
    t0 = time.perf_counter()
    policy = Retention.parse(retain, seed)
    deg = g.degrees
    n = g.n
    hubs = np.flatnonzero(at_least_mean(deg))
    hub_nbd = Neighborhoods.of(g, hubs) if policy.hubs else None
    full_nbd = None
    if policy.fraction == 1.0:
        full_nbd = Neighborhoods(np.arange(n), g.indptr, g.indices)
    elif policy.fraction > 0.0:
        full_nbd = Neighborhoods.of(g, retained_subset(n, policy.fraction, policy.seed))
    elapsed = time.perf_counter() - t0
    return DegreeSummary(
        layer_name=layer_name,
        n=n,
        deg=_ro(deg),
        avg_deg=float(deg.sum()) / n if n else 0.0,
        hubs=_ro(hubs),
        hub_neighborhoods=hub_nbd,
        full_neighborhoods=full_nbd,
        retention=policy,
        psi_time=elapsed,
    )


def distance_sums(g: LayerGraph, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex (sum of finite BFS distances, component size).

    Sources are split into contiguous chunks; each chunk's result lands in
    its own slice, so the output does not depend on ``threads``.
    """
    n = g.n
    sources = np.arange(n, dtype=np.int64)
    if threads <= 1 or n < 2:
        return bfs_distance_sums(g.indptr, g.indices, sources)
    chunks = np.array_split(sources, threads * 4)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: bfs_distance_sums(g.indptr, g.indices, c), chunks))
    return (
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
    )


def wasserman_faust(n: int, finite_sum: np.ndarray, comp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closeness ``((r-1)/(n-1)) * ((r-1)/S)`` as exact (numerator, denominator) arrays.

    ``S`` is the sum of distances inside the vertex's component of size
    ``r``; isolated vertices score 0.
    """
    comp = np.asarray(comp, dtype=np.int64)
    finite_sum = np.asarray(finite_sum, dtype=np.int64)
    live = (comp > 1) & (finite_sum > 0)
    num = np.where(live, (comp - 1) ** 2, 0)
    den = np.where(live, (n - 1) * finite_sum, 1)
    return num, den


def analyze_closeness(g: LayerGraph, *, threads: int = 1, layer_name: str = "") -> ClosenessSummary:
    t0 = time.perf_counter()
    n = g.n
    finite, comp = distance_sums(g, threads)
    # unreachable partners count as distance n
    sum_dist = finite + (n - comp) * n
    num, den = wasserman_faust(n, finite, comp)
    cc_nodes = np.flatnonzero(at_least_mean_ratio(num, den))
    summary = ClosenessSummary(
        layer_name=layer_name,
        n=n,
        deg=_ro(g.degrees),
        sum_dist=_ro(sum_dist),
        cc_value=_ro(num / den, np.float64),
        component_size=_ro(comp),
        cc_nodes=_ro(cc_nodes),
        cc_neighborhoods=Neighborhoods.of(g, cc_nodes),
    )
    object.__setattr__(summary, "psi_time", time.perf_counter() - t0)
    return summary


def analyze_layers(
    mln: MultilayerNetwork,
    kind: str = "degree",
    retain: str | float | Retention = "none",
    *,
    threads: int = 1,
    seed: int = 0,
) -> list[DegreeSummary] | list[ClosenessSummary]:
    """Analyze every layer independently, one worker per layer.

    Output order follows the layer order and is identical to sequential
    calls; each summary carries its own ``psi_time``.
    """
    if kind not in ("degree", "closeness"):
        raise ValueError(f"unknown analysis kind {kind!r}")
    inner = max(1, threads // max(1, len(mln)))

    def one(item):
        name, g = item
        try:
            if kind == "degree":
                return analyze_degree(g, retain, seed=seed, layer_name=name)
            return analyze_closeness(g, threads=inner, layer_name=name)
        except Exception as exc:
            raise LayerAnalysisError(name, exc) from exc

    if threads <= 1 or len(mln) == 1:
        return [one(item) for item in mln]
    with ThreadPoolExecutor(max_workers=min(threads, len(mln))) as pool:
        return list(pool.map(one, mln))


def max_psi_time(summaries: Sequence[DegreeSummary | ClosenessSummary]) -> float:
    return max(s.psi_time for s in summaries)


# -- Ψ artifacts -----------------------------------------------------------


def _pack_nbd(prefix: str, nbd: Neighborhoods | None, out: dict) -> None:
    if nbd is not None:
        out[f"{prefix}_vertices"] = nbd.vertices
        out[f"{prefix}_indptr"] = nbd.indptr
        out[f"{prefix}_indices"] = nbd.indices


def _unpack_nbd(prefix: str, data) -> Neighborhoods | None:
    if f"{prefix}_vertices" not in data:
        return None
    return Neighborhoods(
        data[f"{prefix}_vertices"], data[f"{prefix}_indptr"], data[f"{prefix}_indices"]
    )


def save_summary(summary: DegreeSummary | ClosenessSummary, path: str | Path) -> None:
    """Write a summary as a versioned ``.npz`` artifact."""
    meta = {
        "version": ARTIFACT_VERSION,
        "layer_name": summary.layer_name,
        "n": summary.n,
        "psi_time": summary.psi_time,
    }
    arrays: dict[str, np.ndarray] = {}
    if isinstance(summary, DegreeSummary):
        meta.update(
            type="degree",
            avg_deg=summary.avg_deg,
            retention=str(summary.retention),
            retention_hubs=summary.retention.hubs,
            retention_fraction=summary.retention.fraction,
            seed=summary.retention.seed,
        )
        arrays.update(deg=summary.deg, hubs=summary.hubs)
        _pack_nbd("hubnbd", summary.hub_neighborhoods, arrays)
        _pack_nbd("fullnbd", summary.full_neighborhoods, arrays)
    else:
        meta.update(type="closeness", unreachable_distance="n")
        arrays.update(
            deg=summary.deg,
            sum_dist=summary.sum_dist,
            cc_value=summary.cc_value,
            component_size=summary.component_size,
            cc_nodes=summary.cc_nodes,
        )
        _pack_nbd("ccnbd", summary.cc_neighborhoods, arrays)
    arrays["meta"] = np.array(json.dumps(meta))
    with open(path, "wb") as fh:
        np.savez_compressed(fh, **arrays)


def load_summary(path: str | Path) -> DegreeSummary | ClosenessSummary:
    with np.load(path) as data:
        meta = json.loads(str(data["meta"]))
        if meta.get("version") != ARTIFACT_VERSION:
            raise ValueError(f"{path}: unsupported artifact version {meta.get('version')}")
        if meta["type"] == "degree":
            return DegreeSummary(
                layer_name=meta["layer_name"],
                n=meta["n"],
                deg=_ro(data["deg"]),
                avg_deg=meta["avg_deg"],
                hubs=_ro(data["hubs"]),
                hub_neighborhoods=_unpack_nbd("hubnbd", data),
                full_neighborhoods=_unpack_nbd("fullnbd", data),
                retention=Retention(meta["retention_hubs"], meta["retention_fraction"], meta["seed"]),
                psi_time=meta["psi_time"],
            )
        return ClosenessSummary(
            layer_name=meta["layer_name"],
            n=meta["n"],
            deg=_ro(data["deg"]),
            sum_dist=_ro(data["sum_dist"]),
            cc_value=_ro(data["cc_value"], np.float64),
            component_size=_ro(data["component_size"]),
            cc_nodes=_ro(data["cc_nodes"]),
            cc_neighborhoods=_unpack_nbd("ccnbd", data),
            psi_time=meta["psi_time"],
        )
