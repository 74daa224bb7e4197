"""Synthetic two-layer datasets: RMAT and normal-degree layers, edge splits.

A dataset directory holds ``L1.edges``, ``L2.edges`` and ``meta.json``.
Every generator is a pure function of its spec and seed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import LayerGraph, MultilayerNetwork, build_mln, load_edge_list, save_edge_list

log = logging.getLogger(__name__)

GENERATOR_VERSION = "1"
DEFAULT_RMAT = (0.57, 0.19, 0.19, 0.05)
SPLIT_MODES = ("partition", "independent_sample", "separate_generation")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Split:
    """How a dataset's two layers are obtained.

    ``partition`` and ``independent_sample`` cut one base graph using the
    probabilities ``p``; ``separate_generation`` draws each layer on its own
    with edge budget ``m[i]`` (or ``round(m * p[i])`` from the dataset).
    """

    mode: str
    p: tuple[float, float] | None = None
    m: tuple[int, int] | None = None

    def __post_init__(self):
        if self.mode not in SPLIT_MODES:
            raise ValueError(f"unknown split mode {self.mode!r}")
        if self.p is not None:
            object.__setattr__(self, "p", tuple(float(x) for x in self.p))
            if any(not 0.0 <= x <= 1.0 for x in self.p):
                raise ValueError(f"split probabilities must lie in [0, 1], got {self.p}")
            if self.mode == "partition" and not math.isclose(sum(self.p), 1.0):
                raise ValueError(f"partition probabilities must sum to 1, got {self.p}")
        if self.m is not None:
            object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.mode != "separate_generation" and self.p is None:
            raise ValueError(f"{self.mode} needs probabilities p")
        if self.mode == "separate_generation" and self.p is None and self.m is None:
            raise ValueError("separate_generation needs p or m")

    @classmethod
    def partition(cls, p1: float, p2: float) -> "Split":
        return cls("partition", (p1, p2))

    @classmethod
    def independent_sample(cls, p1: float, p2: float) -> "Split":
        return cls("independent_sample", (p1, p2))

    @classmethod
    def separate_generation(cls, m1: int, m2: int) -> "Split":
        return cls("separate_generation", m=(m1, m2))


@dataclass(frozen=True)
class GenSpec:
    """One layer (or base graph) to generate.

    ``kind`` is ``rmat`` (quadrant probabilities ``rmat``) or ``normal``
    (degrees ~ N(mean_deg, sd_deg); ``mean_deg`` defaults to ``2m/n`` and
    ``sd_deg`` to a third of the mean).
    """

    n: int
    m: int = 0
    kind: str = "rmat"
    rmat: tuple[float, float, float, float] = DEFAULT_RMAT
    mean_deg: float | None = None
    sd_deg: float | None = None
    seed: int = 0
    split: Split | None = None

    def __post_init__(self):
        if self.kind not in ("rmat", "normal"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 0 or self.m < 0:
            raise ValueError("n and m must be non-negative")
        if self.kind == "rmat":
            if any(p <= 0 for p in self.rmat) or not math.isclose(sum(self.rmat), 1.0):
                raise ValueError(f"rmat probabilities must be positive and sum to 1, got {self.rmat}")
        if self.sd_deg is not None and self.sd_deg < 0:
            raise ValueError("sd_deg must be >= 0")


def derive_seed(*parts) -> int:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


# -- RMAT ------------------------------------------------------------------


def _rmat_draw(rng: np.random.Generator, count: int, levels: int, probs) -> tuple[np.ndarray, np.ndarray]:
    a, b, c, _ = probs
    u = np.zeros(count, dtype=np.int64)
    v = np.zeros(count, dtype=np.int64)
    for _ in range(levels):
        r = rng.random(count)
        down = r >= a + b
        right = ((r >= a) & (r < a + b)) | (r >= a + b + c)
        u = (u << 1) | down
        v = (v << 1) | right
    return u, v


def generate_rmat(spec: GenSpec, max_stalls: int = 50) -> LayerGraph:
    """Exactly ``spec.m`` distinct undirected edges by recursive quadrant descent.

    The id space is padded to a power of two; draws that land outside
    ``[0, n)``, self-loops and repeats are rejected and redrawn. Edges are
    kept in draw order until the budget is met.
    """
    n, m = spec.n, spec.m
    if m == 0:
        return LayerGraph.empty(n)
    if m >= n * (n - 1) // 2:
        raise GenerationError(f"m={m} is too dense for n={n}")
    levels = max(1, math.ceil(math.log2(n)))
    rng = np.random.default_rng(spec.seed)
    have = np.zeros(0, dtype=np.int64)
    stalls = 0
    while have.shape[0] < m:
        need = m - have.shape[0]
        u, v = _rmat_draw(rng, int(need * 1.2) + 64, levels, spec.rmat)
        ok = (u != v) & (u < n) & (v < n)
        cand = np.minimum(u[ok], v[ok]) * n + np.maximum(u[ok], v[ok])
        pool = np.concatenate((have, cand))
        _, first = np.unique(pool, return_index=True)
        first.sort()
        grown = pool[first[:m]]
        if grown.shape[0] == have.shape[0]:
            stalls += 1
            if stalls > max_stalls:
                raise GenerationError(
                    f"stuck at {have.shape[0]} of {m} edges after {max_stalls} fruitless rounds"
                )
        have = grown
    return LayerGraph.from_keys(n, np.sort(have))


# -- normal degree distribution -------------------------------------------


def _normal_degrees(rng, n: int, mean: float, sd: float, total: int) -> np.ndarray:
    deg = np.clip(np.rint(rng.normal(mean, sd, n)), 0, max(n - 1, 0)).astype(np.int64)
    diff = total - int(deg.sum())
    while diff != 0:
        step = 1 if diff > 0 else -1
        room = np.flatnonzero(deg < n - 1) if step > 0 else np.flatnonzero(deg > 0)
        if room.shape[0] == 0:
            raise GenerationError("cannot reach the requested degree total")
        pick = rng.choice(room, size=min(abs(diff), room.shape[0]), replace=False)
        deg[pick] += step
        diff -= step * pick.shape[0]
    return deg


def configuration_model(deg: np.ndarray, rng: np.random.Generator, max_tries: int = 1000) -> LayerGraph:
    """Random simple graph with the exact degree sequence ``deg``.

    Stubs are paired at random; self-loops and repeated pairs are then
    rewired one at a time by swapping with a random good edge.
    """
    n = deg.shape[0]
    if int(deg.sum()) % 2:
        raise GenerationError("degree sum must be even")
    stubs = np.repeat(np.arange(n, dtype=np.int64), deg)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    lo, hi = pairs.min(axis=1), pairs.max(axis=1)
    keys = lo * n + hi
    good = np.zeros(keys.shape[0], dtype=bool)
    good[np.unique(keys, return_index=True)[1]] = True
    good &= lo != hi
    bad = pairs[~good]
    if bad.shape[0] == 0:
        return LayerGraph.from_keys(n, np.sort(keys))

    edges = [tuple(e) for e in np.column_stack((lo[good], hi[good])).tolist()]
    present = set(keys[good].tolist())

    def key(a, b):
        return min(a, b) * n + max(a, b)

    for p, q in bad.tolist():
        for _ in range(max_tries):
            if not edges:
                break
            j = int(rng.integers(len(edges)))
            c, d = edges[j]
            if rng.random() < 0.5:
                c, d = d, c
            k1, k2 = key(p, c), key(q, d)
            if p == c or q == d or k1 == k2 or k1 in present or k2 in present:
                continue
            present.discard(key(c, d))
            present.update((k1, k2))
            edges[j] = (p, c)
            edges.append((q, d))
            break
        else:
            raise GenerationError("degree sequence could not be realized as a simple graph")
    return LayerGraph.from_keys(n, np.sort(np.fromiter(present, dtype=np.int64, count=len(present))))


def generate_normal(spec: GenSpec) -> LayerGraph:
    n = spec.n
    mean = spec.mean_deg if spec.mean_deg is not None else (2 * spec.m / n if n else 0.0)
    sd = spec.sd_deg if spec.sd_deg is not None else mean / 3
    total = 2 * spec.m if spec.m else int(round(mean * n))
    if total % 2:
        total -= 1
    if total == 0:
        return LayerGraph.empty(n)
    rng = np.random.default_rng(spec.seed)
    deg = _normal_degrees(rng, n, mean, sd, total)
    return configuration_model(deg, rng)


def generate(spec: GenSpec) -> LayerGraph:
    return generate_rmat(spec) if spec.kind == "rmat" else generate_normal(spec)


# -- splitting -------------------------------------------------------------


def split_layers(base: LayerGraph, split: Split, seed: int) -> tuple[LayerGraph, LayerGraph]:
    """Cut a base graph into two layers.

    ``partition`` sends every edge to exactly one layer; ``independent_sample``
    keeps each edge in layer i with probability ``p[i]`` independently.
    """
    keys = base.edge_keys()
    rng = np.random.default_rng(seed)
    p1, p2 = split.p
    if split.mode == "partition":
        first = rng.random(keys.shape[0]) < p1
        return LayerGraph.from_keys(base.n, keys[first]), LayerGraph.from_keys(base.n, keys[~first])
    if split.mode == "independent_sample":
        in1 = rng.random(keys.shape[0]) < p1
        in2 = rng.random(keys.shape[0]) < p2
        return LayerGraph.from_keys(base.n, keys[in1]), LayerGraph.from_keys(base.n, keys[in2])
    raise ValueError(f"{split.mode} is not a split of an existing graph")


# -- suites ----------------------------------------------------------------


@dataclass(frozen=True)
class DatasetSpec:
    id: str
    n: int
    m: int
    kinds: tuple[str, str] = ("rmat", "rmat")
    split: Split = field(default_factory=lambda: Split("separate_generation", (0.5, 0.5)))
    rmat: tuple[float, float, float, float] = DEFAULT_RMAT
    sd_deg: float | None = None
    seed: int | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetSpec":
        kinds = d.get("kinds", d.get("kind", "rmat"))
        if isinstance(kinds, str):
            kinds = (kinds, kinds)
        split = d.get("split", {"mode": "separate_generation", "p": [0.5, 0.5]})
        return cls(
            id=str(d["id"]),
            n=int(d["n"]),
            m=int(d["m"]),
            kinds=tuple(kinds),
            split=Split(split["mode"], split.get("p"), split.get("m")),
            rmat=tuple(d.get("rmat", DEFAULT_RMAT)),
            sd_deg=d.get("sd_deg"),
            seed=d.get("seed"),
        )

    def layer_specs(self, seed: int) -> list[GenSpec]:
        if self.split.mode == "separate_generation":
            budgets = self.split.m or tuple(int(round(self.m * p)) for p in self.split.p)
            return [
                GenSpec(self.n, mi, kind, self.rmat, sd_deg=self.sd_deg, seed=derive_seed(seed, name))
                for mi, kind, name in zip(budgets, self.kinds, ("L1", "L2"))
            ]
        return [GenSpec(self.n, self.m, self.kinds[0], self.rmat, sd_deg=self.sd_deg, seed=derive_seed(seed, "base"))]


def parse_manifest(manifest) -> list[tuple[DatasetSpec, int]]:
    """Manifest: a JSON list of dataset entries, or ``{"seed": s, "datasets": [...]}``.

    Entries without their own seed get ``derive_seed(manifest seed, id)``.
    """
    if isinstance(manifest, (str, Path)):
        manifest = json.loads(Path(manifest).read_text())
    base_seed = 0
    if isinstance(manifest, dict):
        base_seed = int(manifest.get("seed", 0))
        manifest = manifest.get("datasets", [])
    specs = [DatasetSpec.from_dict(d) if isinstance(d, dict) else d for d in manifest]
    if not specs:
        raise ValueError("no datasets in manifest")
    ids = [s.id for s in specs]
    if len(set(ids)) != len(ids):
        raise ValueError("dataset ids in a manifest must be unique")
    return [(s, s.seed if s.seed is not None else derive_seed(base_seed, s.id)) for s in specs]


def generate_dataset(ds: DatasetSpec, seed: int) -> tuple[LayerGraph, LayerGraph]:
    specs = ds.layer_specs(seed)
    if ds.split.mode == "separate_generation":
        return generate(specs[0]), generate(specs[1])
    base = generate(specs[0])
    return split_layers(base, ds.split, derive_seed(seed, "split"))


def write_dataset(ds: DatasetSpec, seed: int, out_dir: str | Path) -> Path:
    target = Path(out_dir) / ds.id
    target.mkdir(parents=True, exist_ok=True)
    l1, l2 = generate_dataset(ds, seed)
    save_edge_list(l1, target / "L1.edges")
    save_edge_list(l2, target / "L2.edges")
    meta = {
        "id": ds.id,
        "n": ds.n,
        "m": ds.m,
        "kinds": list(ds.kinds),
        "split": {k: v for k, v in asdict(ds.split).items() if v is not None},
        "rmat": list(ds.rmat),
        "sd_deg": ds.sd_deg,
        "seed": seed,
        "edges": {"L1": l1.edge_count, "L2": l2.edge_count},
        "generator_version": GENERATOR_VERSION,
    }
    (target / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    log.info("wrote %s (L1=%d, L2=%d edges)", target, l1.edge_count, l2.edge_count)
    return target


def build_suite(manifest, out_dir: str | Path, threads: int = 1) -> list[Path]:
    entries = parse_manifest(manifest)
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    if threads <= 1:
        return [write_dataset(ds, seed, out_dir) for ds, seed in entries]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda e: write_dataset(e[0], e[1], out_dir), entries))


def load_dataset(path: str | Path) -> tuple[MultilayerNetwork, dict]:
    path = Path(path)
    meta = json.loads((path / "meta.json").read_text())
    n = int(meta["n"])
    layers = [(name, load_edge_list(path / f"{name}.edges", n)) for name in ("L1", "L2")]
    return build_mln(layers), meta


def suite_manifest(
    prefix: str,
    sizes: Sequence[tuple[int, int]],
    kinds: tuple[str, str] = ("rmat", "rmat"),
    splits: Sequence[tuple[int, int]] = ((70, 30), (60, 40), (50, 50)),
    mode: str = "separate_generation",
    seed: int = 0,
    sd_deg: float | None = None,
) -> dict:
    """Manifest for a grid of base sizes x edge distributions, named like ``syn1_100K_500K_70_30``."""

    def short(x: int) -> str:
        for unit, div in (("M", 1_000_000), ("K", 1_000)):
            if x >= div and x % div == 0:
                return f"{x // div}{unit}"
        return str(x)

    datasets = []
    for n, m in sizes:
        for p1, p2 in splits:
            datasets.append(
                {
                    "id": f"{prefix}_{short(n)}_{short(m)}_{p1}_{p2}",
                    "n": n,
                    "m": m,
                    "kinds": list(kinds),
                    "split": {"mode": mode, "p": [p1 / 100, p2 / 100]},
                    **({"sd_deg": sd_deg} if sd_deg is not None else {}),
                }
            )
    return {"seed": seed, "datasets": datasets}
