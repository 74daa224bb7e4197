"""``mln`` command line: generate, analyze, compose, ground-truth, run, report.

Exit codes: 0 ok, 1 usage error, 2 data error. ``MLN_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import bench
from .analysis import analyze_closeness, analyze_degree, load_summary, save_summary
from .composition import CompositionError, compose, resolve_method
from .graph import EdgeListError, GraphError, load_edge_list, save_edge_list
from .oracle import ground_truth_cc_nodes, ground_truth_degree_hubs
from .synth import GenerationError, build_suite, load_dataset

log = logging.getLogger("mlndecouple")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, help="seed for generation and retained subsets (default 0)")
    p.add_argument("--threads", type=int, help="worker threads (default 1)")
    p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    return p


def _fractions(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of fractions: {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mln", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="build a synthetic dataset suite")
    p.add_argument("--manifest", required=True, help="JSON manifest of datasets")

    p = sub.add_parser("analyze", parents=[common], help="analyze one layer and write a summary artifact")
    p.add_argument("edges", help="layer edge list")
    p.add_argument("--kind", choices=("degree", "closeness"), default="degree")
    p.add_argument("--retain", default="none", help="none | hubs | all | <fraction> | hubs+<fraction>")
    p.add_argument("--name", default=None, help="layer name (default: file stem)")
    p.add_argument("--n", type=int, default=None, help="vertex count")

    p = sub.add_parser("compose", parents=[common], help="combine two summary artifacts")
    p.add_argument("summaries", nargs=2, help="two artifacts written by 'analyze'")
    p.add_argument("--method", required=True)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")

    p = sub.add_parser("ground-truth", parents=[common], help="aggregate two layers and extract exact nodes")
    p.add_argument("layers", nargs=2)
    p.add_argument("--kind", choices=("degree", "closeness"), default="degree")
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("run", parents=[common], help="evaluate heuristics on dataset directories")
    p.add_argument("datasets", nargs="+", help="dataset directories (L1.edges, L2.edges, meta.json)")
    p.add_argument("--methods", required=True, help="comma-separated method names")
    p.add_argument("--kind", choices=("degree", "closeness"), default="degree")
    p.add_argument("--retain", default=None, help="override the per-method retention policy")
    p.add_argument("--info-fraction", type=_fractions, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p.add_argument("--overlap-threshold", type=int, default=2)
    p.add_argument("--no-include-common", action="store_true")
    p.add_argument("--selection", choices=("above-average", "top-k"), default="above-average")
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--gt-cap", type=int, default=None, help="skip ground truth above this many vertices")

    p = sub.add_parser("report", parents=[common], help="summarize result CSVs")
    p.add_argument("csvs", nargs="+")
    p.add_argument("--baseline", default="naive")
    p.add_argument("--metric", choices=("jaccard", "precision", "recall"), default="jaccard")
    p.add_argument("--plot-data", default=None, help="directory for plot-ready series")
    return parser


def _opt(args, name, default):
    return getattr(args, name, default)


def _write_nodes(nodes: np.ndarray, path: Path | None) -> None:
    text = "".join(f"{int(v)}\n" for v in nodes)
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for item in pairs:
        if "=" not in item:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip().replace("-", "_")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def cmd_generate(args) -> int:
    out = _opt(args, "out", "data")
    dirs = build_suite(args.manifest, out, threads=_opt(args, "threads", 1))
    for d in dirs:
        print(d)
    return 0


def cmd_analyze(args) -> int:
    g = load_edge_list(args.edges, args.n)
    name = args.name or Path(args.edges).stem
    if args.kind == "degree":
        s = analyze_degree(g, args.retain, seed=_opt(args, "seed", 0), layer_name=name)
    else:
        s = analyze_closeness(g, threads=_opt(args, "threads", 1), layer_name=name)
    out = _opt(args, "out", f"{name}.{args.kind}.npz")
    save_summary(s, out)
    print(out)
    return 0


def cmd_compose(args) -> int:
    sx, sy = (load_summary(p) for p in args.summaries)
    kind = "degree" if hasattr(sx, "hubs") else "closeness"
    method = resolve_method(args.method, kind)
    params = _parse_params(args.param)
    try:
        result = compose(method, sx, sy, **params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {method.value}: {exc}") from None
    nodes = result.hubs if kind == "degree" else result.cc_nodes
    record = {
        "method": method.value,
        "params": {**params, **result.params},
        "theta_time": result.theta_time * 1000.0,
        "count": int(nodes.shape[0]),
    }
    out = _opt(args, "out", None)
    if out is None:
        _write_nodes(nodes, None)
        print(json.dumps(record), file=sys.stderr)
    else:
        _write_nodes(nodes, Path(out))
        Path(out + ".json").write_text(json.dumps(record, indent=2))
    return 0


def cmd_ground_truth(args) -> int:
    x = load_edge_list(args.layers[0], args.n)
    y = load_edge_list(args.layers[1], args.n if args.n is not None else x.n)
    if args.kind == "degree":
        gt = ground_truth_degree_hubs(x, y)
    else:
        gt = ground_truth_cc_nodes(x, y, threads=_opt(args, "threads", 1))
    out = Path(_opt(args, "out", "ground_truth"))
    out.mkdir(parents=True, exist_ok=True)
    save_edge_list(gt.aggregated, out / "aggregated.edges", meta={"op": "OR" if args.kind == "degree" else "AND"})
    _write_nodes(gt.nodes, out / "nodes.txt")
    timing = {
        "kind": args.kind,
        "n": gt.aggregated.n,
        "edges_agg": gt.aggregated.edge_count,
        "count": int(gt.nodes.shape[0]),
        "gt_time": gt.elapsed * 1000.0,
    }
    if gt.avg_deg is not None:
        timing["avg_deg"] = gt.avg_deg
    (out / "timing.json").write_text(json.dumps(timing, indent=2))
    print(out)
    return 0


def cmd_run(args) -> int:
    cfg = bench.RunConfig(
        methods=[m for m in args.methods.split(",") if m.strip()],
        kind=args.kind,
        retain=args.retain,
        info_fractions=args.info_fraction,
        overlap_threshold=args.overlap_threshold,
        include_common=not args.no_include_common,
        selection=args.selection,
        top_k=args.top_k,
        gt_cap=args.gt_cap,
        threads=_opt(args, "threads", 1),
        seed=_opt(args, "seed", 0),
    )
    cfg.resolved()
    datasets = []
    for d in sorted(args.datasets):
        mln, meta = load_dataset(d)
        datasets.append((str(meta.get("id", Path(d).name)), mln))
    t0 = time.perf_counter()
    result = bench.run(datasets, cfg)
    log.info("run finished in %.1f s", time.perf_counter() - t0)
    out = _opt(args, "out", None)
    fmt = _opt(args, "format", "csv")
    baseline = "naive" if any(m.startswith("naive") for m in cfg.methods) else None
    if out is None:
        if fmt == "json":
            print(json.dumps(result.to_json(baseline), indent=2, default=float))
        else:
            import csv

            w = csv.DictWriter(sys.stdout, fieldnames=bench.CSV_FIELDS)
            w.writeheader()
            w.writerows({k: r.get(k, "") for k in bench.CSV_FIELDS} for r in result.rows)
        return 0
    out = Path(out)
    if fmt == "json":
        bench.dump_json(result.to_json(baseline), out)
    else:
        result.write_csv(out)
        bench.dump_json(result.to_json(baseline), out.with_suffix(".json"))
    print(out)
    return 0


def cmd_report(args) -> int:
    summary = bench.report(args.csvs, args.baseline, args.metric)
    if args.plot_data:
        bench.write_plot_data(args.csvs, args.plot_data)
    fmt = _opt(args, "format", "csv")
    text = json.dumps(summary, indent=2) if fmt == "json" else bench.format_table(summary)
    out = _opt(args, "out", None)
    if out is None:
        print(text)
    else:
        Path(out).write_text(text + "\n")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "compose": cmd_compose,
    "ground-truth": cmd_ground_truth,
    "run": cmd_run,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("MLN_LOG", "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CompositionError) as exc:
        print(f"mln {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        EdgeListError,
        GraphError,
        GenerationError,
        bench.ReportError,
        FileNotFoundError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"mln {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
