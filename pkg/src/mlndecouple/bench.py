"""Experiment harness: analyze -> compose -> ground truth -> evaluate -> report.

Result rows follow a fixed, versioned CSV schema (:data:`CSV_FIELDS`).
Times are milliseconds of monotonic wall clock; file I/O is never inside
a timed phase. The decoupled cost of a method is the slower layer's
analysis time plus its composition time.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .analysis import Retention, analyze_layers
from .composition import (
    ClosenessMethod,
    CompositionError,
    DegreeMethod,
    compose,
    resolve_method,
)
from .graph import LayerGraph, MultilayerNetwork, build_mln
from .metrics import SetComparison, SuiteSummary, compare_sets, summarize
from .oracle import ground_truth_cc_nodes, ground_truth_degree_hubs

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_FIELDS = [
    "dataset_id", "n", "edges_l1", "edges_l2", "edges_agg", "method", "params",
    "jaccard", "precision", "recall", "tp", "fp", "fn",
    "psi_time_l1", "psi_time_l2", "psi_time_max", "theta_time", "gt_time", "speedup",
    "schema_version",
]


class ReportError(ValueError):
    pass


def warm_up() -> None:
    """Compile the numba kernels so no timed phase pays for JIT."""
    g = LayerGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    h = LayerGraph.from_edges(4, [(0, 1), (1, 3)])
    mln = build_mln([("a", g), ("b", h)])
    for kind in ("degree", "closeness"):
        sx, sy = analyze_layers(mln, kind, "hubs+0.5")
        for m in (DegreeMethod if kind == "degree" else ClosenessMethod):
            compose(m, sx, sy)
    ground_truth_degree_hubs(g, h)
    ground_truth_cc_nodes(g, h)


@dataclass
class RunConfig:
    methods: Sequence[str]
    kind: str = "degree"
    retain: str | None = None
    info_fractions: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0)
    overlap_threshold: int = 2
    include_common: bool = True
    selection: str = "above-average"
    top_k: int | None = None
    gt_cap: int | None = None
    threads: int = 1
    seed: int = 0

    def resolved(self):
        return [resolve_method(m, self.kind) for m in self.methods]


@dataclass
class EvaluationReport:
    rows: list[dict] = field(default_factory=list)

    def comparisons(self, method: str, params: str | None = None) -> list[SetComparison]:
        out = []
        for r in self.rows:
            if r["method"] == method and (params is None or r["params"] == params) and r["jaccard"] != "":
                out.append(
                    SetComparison(r["jaccard"], r["precision"], r["recall"], r["tp"], r["fp"], r["fn"])
                )
        return out

    def summaries(self, baseline: str | None = None) -> dict[str, SuiteSummary]:
        return summarize_rows(self.rows, baseline)

    def write_csv(self, path: str | Path) -> None:
        write_rows(self.rows, path)

    def to_json(self, baseline: str | None = None) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "rows": self.rows,
            "summaries": {k: vars(v) for k, v in self.summaries(baseline).items()},
        }


def _ms(seconds: float) -> float:
    return round(seconds * 1000.0, 4)


def _needed_retention(method, cfg: RunConfig) -> list[Retention]:
    if cfg.retain is not None and method is not DegreeMethod.DC_A2_INFO:
        return [Retention.parse(cfg.retain, cfg.seed)]
    if method in (DegreeMethod.DC_P1, DegreeMethod.DC_P2):
        return [Retention(hubs=True, seed=cfg.seed)]
    if method is DegreeMethod.DC_A2_INFO:
        return [Retention(False, float(f), cfg.seed) for f in cfg.info_fractions]
    return [Retention(seed=cfg.seed)]


def _method_params(method, cfg: RunConfig) -> dict:
    if method is ClosenessMethod.CC1:
        return {"overlap_threshold": cfg.overlap_threshold, "include_common": cfg.include_common}
    if method is ClosenessMethod.CC2:
        return {"selection": cfg.selection, "k": cfg.top_k}
    return {}


def _params_label(method, retention: Retention | None, params: dict) -> str:
    if method is DegreeMethod.DC_A2_INFO and retention is not None:
        return f"f={retention.fraction:g}"
    if method is ClosenessMethod.CC1:
        return f"threshold={params['overlap_threshold']}"
    if method is ClosenessMethod.CC2 and params["selection"] == "top-k":
        return f"top-k={params['k']}"
    return ""


def evaluate_mln(mln: MultilayerNetwork, dataset_id: str, cfg: RunConfig) -> list[dict]:
    """All requested methods on one two-layer network; one row per method (and fraction)."""
    if len(mln) != 2:
        raise ValueError(f"{dataset_id}: expected 2 layers, got {len(mln)}")
    methods = cfg.resolved()
    x, y = mln.graphs

    gt = None
    if cfg.gt_cap is None or mln.n <= cfg.gt_cap:
        if cfg.kind == "degree":
            gt = ground_truth_degree_hubs(x, y)
        else:
            gt = ground_truth_cc_nodes(x, y, threads=cfg.threads)

    rows = []
    psi_cache: dict[Retention | str, list] = {}
    for method in methods:
        if cfg.kind == "degree":
            runs = []
            for ret in _needed_retention(method, cfg):
                if ret not in psi_cache:
                    psi_cache[ret] = analyze_layers(mln, "degree", ret, threads=cfg.threads, seed=cfg.seed)
                runs.append((ret, psi_cache[ret]))
        else:
            if "closeness" not in psi_cache:
                psi_cache["closeness"] = analyze_layers(mln, "closeness", threads=cfg.threads)
            runs = [(None, psi_cache["closeness"])]
        params = _method_params(method, cfg)
        for ret, (sx, sy) in runs:
            result = compose(method, sx, sy, **params)
            nodes = result.hubs if cfg.kind == "degree" else result.cc_nodes
            psi_max = max(sx.psi_time, sy.psi_time)
            row = {
                "dataset_id": dataset_id,
                "n": mln.n,
                "edges_l1": x.edge_count,
                "edges_l2": y.edge_count,
                "edges_agg": gt.aggregated.edge_count if gt else "",
                "method": method.value,
                "params": _params_label(method, ret, params),
                "psi_time_l1": _ms(sx.psi_time),
                "psi_time_l2": _ms(sy.psi_time),
                "psi_time_max": _ms(psi_max),
                "theta_time": _ms(result.theta_time),
                "gt_time": _ms(gt.elapsed) if gt else "",
                "speedup": round(gt.elapsed / (psi_max + result.theta_time), 4) if gt else "",
                "schema_version": SCHEMA_VERSION,
            }
            if gt is not None:
                cmp = compare_sets(nodes, gt.nodes)
                row.update(vars(cmp))
            else:
                row.update({k: "" for k in ("jaccard", "precision", "recall", "tp", "fp", "fn")})
            rows.append(row)
    return rows


def run(datasets: Iterable[tuple[str, MultilayerNetwork]], cfg: RunConfig) -> EvaluationReport:
    """Evaluate datasets one after another so their timings do not interfere."""
    cfg.resolved()  # fail fast on bad method names
    warm_up()
    report = EvaluationReport()
    for dataset_id, mln in datasets:
        log.info("evaluating %s (n=%d)", dataset_id, mln.n)
        report.rows.extend(evaluate_mln(mln, dataset_id, cfg))
    report.rows.sort(key=lambda r: (r["dataset_id"], r["method"], r["params"]))
    return report


# -- CSV I/O and suite summaries -------------------------------------------


def write_rows(rows: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in CSV_FIELDS})


_INT = {"n", "edges_l1", "edges_l2", "edges_agg", "tp", "fp", "fn", "schema_version"}
_STR = {"dataset_id", "method", "params"}


def read_rows(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_FIELDS:
            raise ReportError(f"{path}: header does not match results schema v{SCHEMA_VERSION}")
        rows = []
        for r in reader:
            if int(r["schema_version"]) != SCHEMA_VERSION:
                raise ReportError(f"{path}: schema version {r['schema_version']} unsupported")
            for k, v in r.items():
                if k in _STR or v == "":
                    continue
                r[k] = int(v) if k in _INT else float(v)
            rows.append(r)
    return rows


def _label(r: dict) -> str:
    return r["method"] + (f"[{r['params']}]" if r["params"] else "")


def summarize_rows(rows: Sequence[dict], baseline: str | None = None) -> dict[str, SuiteSummary]:
    """Per-method suite means; gains are paired with the baseline by dataset id."""
    by_label: dict[str, dict[str, SetComparison]] = defaultdict(dict)
    for r in rows:
        if r["jaccard"] == "":
            continue
        by_label[_label(r)][r["dataset_id"]] = SetComparison(
            r["jaccard"], r["precision"], r["recall"], r["tp"], r["fp"], r["fn"]
        )
    base_label = None
    if not by_label:
        return {}
    if baseline is not None:
        candidates = [lbl for lbl in by_label if lbl == baseline or lbl.split("[")[0] == baseline]
        if baseline == "naive":
            candidates = [lbl for lbl in by_label if lbl in ("naive-or", "naive-and")]
        if not candidates:
            raise ReportError(f"baseline method {baseline!r} not present in results")
        base_label = candidates[0]
    out = {}
    for lbl, per_ds in sorted(by_label.items()):
        ids = sorted(per_ds)
        base = None
        if base_label is not None:
            ids = [d for d in ids if d in by_label[base_label]]
            base = [by_label[base_label][d] for d in ids]
        if not ids:
            continue
        out[lbl] = summarize([per_ds[d] for d in ids], base)
    return out


def report(csv_paths: Sequence[str | Path], baseline: str, metric: str = "jaccard") -> dict:
    """Per-suite (one CSV = one suite) mean metric and gain vs the baseline."""
    if not csv_paths:
        raise ReportError("no result files given")
    suites = {}
    for path in csv_paths:
        rows = read_rows(path)
        suites[Path(path).stem] = {
            lbl: vars(s) for lbl, s in summarize_rows(rows, baseline).items()
        }
    return {"baseline": baseline, "metric": metric, "suites": suites}


def format_table(summary: dict) -> str:
    """Text table in the shape of "mean accuracy per method, gain vs naive"."""
    metric = summary["metric"]
    base = summary["baseline"]
    labels = sorted({lbl for s in summary["suites"].values() for lbl in s})
    base_labels = {lbl for lbl in labels if lbl == base or (base == "naive" and lbl.startswith("naive"))}
    shown = [lbl for lbl in labels if lbl not in base_labels]
    head = ["Suite"] + [f"{lbl}" for lbl in labels] + [f"{lbl} vs. {base}" for lbl in shown]
    lines = [" | ".join(head)]
    for suite, per in summary["suites"].items():
        cells = [suite]
        for lbl in labels:
            cells.append(f"{100 * per[lbl][metric]:.2f}%" if lbl in per else "-")
        for lbl in shown:
            g = per.get(lbl, {}).get("gain") if metric == "jaccard" else None
            cells.append(f"{100 * g:+.2f}%" if g is not None else "-")
        lines.append(" | ".join(cells))
    return "\n".join(lines)


def write_plot_data(csv_paths: Sequence[str | Path], out_dir: str | Path) -> list[Path]:
    """Plot-ready series: accuracy per dataset and method, and timing (log-scale friendly)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    acc_path, time_path = out_dir / "accuracy_series.csv", out_dir / "timing_series.csv"
    with open(acc_path, "w", newline="") as fa, open(time_path, "w", newline="") as ft:
        wa, wt = csv.writer(fa), csv.writer(ft)
        wa.writerow(["suite", "dataset_id", "method", "params", "jaccard", "precision", "recall"])
        wt.writerow(["suite", "dataset_id", "method", "params", "decoupled_ms", "gt_ms", "log10_speedup"])
        for path in csv_paths:
            suite = Path(path).stem
            for r in read_rows(path):
                key = [suite, r["dataset_id"], r["method"], r["params"]]
                wa.writerow(key + [r["jaccard"], r["precision"], r["recall"]])
                decoupled = r["psi_time_max"] + r["theta_time"]
                speed = r["speedup"]
                wt.writerow(key + [decoupled, r["gt_time"], np.log10(speed) if speed not in ("", 0) else ""])
    return [acc_path, time_path]


def dump_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, default=float))
