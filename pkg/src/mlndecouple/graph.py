"""Layer graphs, homogeneous multilayer networks and edge-list persistence.

A :class:`LayerGraph` is an immutable undirected simple graph stored as CSR
arrays over dense vertex ids ``0..n-1``. Every layer of a
:class:`MultilayerNetwork` shares the same vertex universe.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._kernels import csr_from_sorted_keys

log = logging.getLogger(__name__)

SIDECAR_SUFFIX = ".meta.json"


class GraphError(ValueError):
    """Invalid graph or multilayer network construction."""


class EdgeListError(ValueError):
    """Malformed edge-list file; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, path: str | Path | None = None, lineno: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{lineno}: " if lineno is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.lineno = lineno


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LayerGraph:
    """Undirected simple graph in CSR form; rows are sorted and symmetric."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indptr", _frozen(self.indptr))
        object.__setattr__(self, "indices", _frozen(self.indices))
        if self.indptr.shape != (self.n + 1,):
            raise GraphError(f"indptr has shape {self.indptr.shape}, expected ({self.n + 1},)")

    @classmethod
    def empty(cls, n: int) -> "LayerGraph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def from_keys(cls, n: int, keys: np.ndarray) -> "LayerGraph":
        """Build from strictly increasing edge keys ``u * n + v`` with ``u < v``."""
        keys = np.ascontiguousarray(keys, dtype=np.int64)
        if n == 0:
            return cls.empty(0)
        indptr, indices = csr_from_sorted_keys(keys, n)
        return cls(n, indptr, indices)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] | np.ndarray) -> "LayerGraph":
        """Build from an edge list, dropping self-loops and duplicate edges."""
        return normalize_edges(n, edges)[0]

    @property
    def edge_count(self) -> int:
        return int(self.indices.shape[0] // 2)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def edge_keys(self) -> np.ndarray:
        """Sorted keys ``u * n + v`` (u < v), one per undirected edge."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        upper = self.indices > rows
        return rows[upper] * self.n + self.indices[upper]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with u < v in lexicographic order."""
        keys = self.edge_keys()
        if self.n == 0:
            return np.zeros((0, 2), dtype=np.int64)
        return np.column_stack((keys // self.n, keys % self.n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LayerGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LayerGraph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class LoadStats:
    lines: int = 0
    self_loops: int = 0
    duplicates: int = 0


def normalize_edges(n: int, edges) -> tuple[LayerGraph, LoadStats]:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError(f"edges must have shape (m, 2), got {arr.shape}")
    if arr.shape[0] and (arr.min() < 0 or arr.max() >= n):
        raise GraphError(f"vertex id out of range [0, {n})")
    loops = arr[:, 0] == arr[:, 1]
    arr = arr[~loops]
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    keys = np.unique(lo * n + hi)
    stats = LoadStats(
        lines=int(loops.size),
        self_loops=int(loops.sum()),
        duplicates=int(arr.shape[0] - keys.size),
    )
    return LayerGraph.from_keys(n, keys), stats


@dataclass(frozen=True)
class MultilayerNetwork:
    """Ordered, uniquely named layers over one shared vertex set."""

    n: int
    layers: tuple[tuple[str, LayerGraph], ...] = field(default_factory=tuple)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.layers]

    @property
    def graphs(self) -> list[LayerGraph]:
        return [g for _, g in self.layers]

    def __getitem__(self, key: str | int) -> LayerGraph:
        if isinstance(key, int):
            return self.layers[key][1]
        for name, g in self.layers:
            if name == key:
                return g
        raise KeyError(key)

    def __len__(self) -> int:
        return len(self.layers)

    def __iter__(self) -> Iterator[tuple[str, LayerGraph]]:
        return iter(self.layers)


def build_mln(layers: Sequence[tuple[str, LayerGraph]]) -> MultilayerNetwork:
    """Validate layers (>= 1, equal n, unique names) and keep their order."""
    layers = tuple((str(name), g) for name, g in layers)
    if not layers:
        raise GraphError("a multilayer network needs at least one layer")
    sizes = {g.n for _, g in layers}
    if len(sizes) != 1:
        detail = ", ".join(f"{name}: n={g.n}" for name, g in layers)
        raise GraphError(f"layers disagree on vertex count ({detail})")
    names = [name for name, _ in layers]
    dupes = sorted({x for x in names if names.count(x) > 1})
    if dupes:
        raise GraphError(f"duplicate layer names: {dupes}")
    return MultilayerNetwork(sizes.pop(), layers)


# -- edge-list files -------------------------------------------------------


def _scan_for_error(path: Path, n: int | None) -> None:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise EdgeListError(f"expected 2 fields, got {len(parts)}", path, lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListError(f"not an integer pair: {text!r}", path, lineno) from None
            if u < 0 or v < 0:
                raise EdgeListError(f"negative vertex id: {text!r}", path, lineno)
            if n is not None and max(u, v) >= n:
                raise EdgeListError(f"vertex id {max(u, v)} >= n={n}", path, lineno)


def _raw_pairs(path: Path) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # empty input
        arr = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=2)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.shape[1] != 2:
        raise ValueError("wrong column count")
    return arr


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + SIDECAR_SUFFIX)


def read_edge_list(path: str | Path, n: int | None = None) -> tuple[LayerGraph, LoadStats]:
    """Parse an edge list, normalizing it into a simple graph.

    When ``n`` is omitted it comes from the sidecar metadata file if one
    exists, otherwise from ``1 + max id``.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    try:
        arr = _raw_pairs(path)
    except ValueError:
        _scan_for_error(path, n)
        raise EdgeListError("unparseable edge list", path) from None
    if arr.shape[0] and arr.min() < 0:
        _scan_for_error(path, n)
    if n is None:
        side = sidecar_path(path)
        if side.exists():
            n = int(json.loads(side.read_text())["n"])
    if n is None:
        n = int(arr.max()) + 1 if arr.shape[0] else 0
    elif arr.shape[0] and arr.max() >= n:
        _scan_for_error(path, n)
    g, stats = normalize_edges(n, arr)
    if stats.self_loops or stats.duplicates:
        log.info(
            "%s: dropped %d self-loops and %d duplicate edges",
            path, stats.self_loops, stats.duplicates,
        )
    return g, stats


def load_edge_list(path: str | Path, n: int | None = None) -> LayerGraph:
    return read_edge_list(path, n)[0]


def save_edge_list(g: LayerGraph, path: str | Path, meta: dict | None = None) -> None:
    """Write each edge once as ``u v`` (u < v) in ascending order.

    ``meta`` (if given) is written to the sidecar file together with ``n``
    and ``edge_count``.
    """
    path = Path(path)
    edges = g.edges()
    with open(path, "w", encoding="utf-8") as fh:
        if edges.shape[0]:
            np.savetxt(fh, edges, fmt="%d %d")
    if meta is not None:
        record = {"n": g.n, "edge_count": g.edge_count, **meta}
        sidecar_path(path).write_text(json.dumps(record, indent=2, sort_keys=True))


def load_layers_remapped(
    paths: Sequence[str | Path], names: Sequence[str] | None = None
) -> tuple[MultilayerNetwork, list[str]]:
    """Load layers whose files use arbitrary vertex labels.

    Labels are translated to dense ids jointly across all files (first
    appearance order); the returned list maps dense id -> original label.
    """
    ids: dict[str, int] = {}
    raw = []
    for path in paths:
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                parts = text.split()
                if len(parts) != 2:
                    raise EdgeListError(f"expected 2 fields, got {len(parts)}", path, lineno)
                pairs.append([ids.setdefault(p, len(ids)) for p in parts])
        raw.append(pairs)
    n = len(ids)
    names = list(names) if names is not None else [f"L{i + 1}" for i in range(len(paths))]
    layers = [(name, LayerGraph.from_edges(n, pairs)) for name, pairs in zip(names, raw)]
    return build_mln(layers), list(ids)


def save_id_table(labels: Sequence[str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for dense, label in enumerate(labels):
            fh.write(f"{dense}\t{label}\n")
