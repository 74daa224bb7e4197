#!/usr/bin/env python3
"""Decoupled time (max layer psi + theta) against aggregate-then-analyse time.

Each layer is analysed on its own so its time stands for a dedicated worker.
"""

import argparse
import os

import numpy as np

from mlndecouple import (
    GenSpec,
    Split,
    analyze_closeness,
    analyze_degree,
    build_mln,
    cc2,
    dc_a2,
    generate_rmat,
    split_layers,
)
from mlndecouple.bench import warm_up
from mlndecouple.oracle import ground_truth_cc_nodes, ground_truth_degree_hubs
from mlndecouple.synth import DatasetSpec, generate_dataset


def degree_case(n, m, reps):
    ds = DatasetSpec("deg", n, m, ("rmat", "rmat"), Split("separate_generation", (0.5, 0.5)))
    x, y = generate_dataset(ds, 1)
    rows = []
    for _ in range(reps):
        gt = ground_truth_degree_hubs(x, y)
        sx, sy = analyze_degree(x), analyze_degree(y)
        r = dc_a2(sx, sy)
        rows.append((max(sx.psi_time, sy.psi_time) + r.theta_time, gt.elapsed))
    return [float(np.median(c)) for c in zip(*rows)]


def closeness_case(n, m, overlap, threads):
    base = generate_rmat(GenSpec(n, m, seed=8))
    x, y = split_layers(base, Split.independent_sample(overlap, overlap), seed=8)
    gt = ground_truth_cc_nodes(x, y, threads=threads)
    cx, cy = (analyze_closeness(g, threads=threads) for g in (x, y))
    r = cc2(cx, cy)
    return max(cx.psi_time, cy.psi_time) + r.theta_time, gt.elapsed, gt.aggregated.edge_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    warm_up()
    print(f"cpu_count={os.cpu_count()} threads={args.threads}")
    print("degree (DC-A2)")
    for n, m in [(50_000, 500_000), (100_000, 1_000_000), (200_000, 2_000_000)]:
        dec, gt = degree_case(n, m, args.reps)
        print(f"  n={n:>7} m={m:>8}  decoupled {dec * 1e3:8.2f} ms  gt {gt * 1e3:8.2f} ms  speedup {gt / dec:6.1f}x")
    print("closeness (CC2)")
    for n, m, overlap in [(2_000, 20_000, 0.7), (5_000, 50_000, 0.7), (10_000, 100_000, 0.7)]:
        dec, gt, and_edges = closeness_case(n, m, overlap, args.threads)
        print(f"  n={n:>7} m={m:>8}  decoupled {dec * 1e3:8.0f} ms  gt {gt * 1e3:8.0f} ms  speedup {gt / dec:6.2f}x  AND edges {and_edges}")


if __name__ == "__main__":
    main()
