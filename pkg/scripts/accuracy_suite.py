#!/usr/bin/env python3
"""Generate the desk-scale power-law/power-law suite and score the degree heuristics.

    python scripts/accuracy_suite.py --out results/syn1
"""

import argparse
import logging
from pathlib import Path

from mlndecouple import bench
from mlndecouple.synth import build_suite, load_dataset

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--manifest", default=str(HERE / "syn1_desk.json"))
    ap.add_argument("--out", default="results/syn1")
    ap.add_argument("--methods", default="naive,dc-a1,dc-a2,dc-p1,dc-p2")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    out = Path(args.out)
    dirs = build_suite(args.manifest, out / "data", threads=args.threads)
    datasets = []
    for d in dirs:
        mln, meta = load_dataset(d)
        datasets.append((meta["id"], mln))
    cfg = bench.RunConfig(methods=args.methods.split(","), threads=args.threads)
    report = bench.run(datasets, cfg)
    csv_path = out / "syn1.csv"
    report.write_csv(csv_path)
    bench.dump_json(report.to_json("naive"), out / "syn1.json")
    bench.write_plot_data([csv_path], out / "plot")

    print(bench.format_table(bench.report([csv_path], "naive")))
    print()
    print(bench.format_table(bench.report([csv_path], "naive", metric="precision")))


if __name__ == "__main__":
    main()
