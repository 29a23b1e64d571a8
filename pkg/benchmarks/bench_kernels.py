#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the Python/numpy reference.

Usage: python benchmarks/bench_kernels.py [--repeat 3]

Both backends produce identical outputs (see tests/test_kernels.py); this
script only measures the speed gap on representative workloads.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from layersim import _kernels_py as pyk
from layersim import cycle_plus_matching, grid_layers, sample_ages

try:
    from layersim import _kernels_c as ck
except ImportError:
    ck = None


def timeit(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    rng = np.random.default_rng(0)

    g = cycle_plus_matching(200_000, seed=1)
    ages = sample_ages(g, seed=2)
    indptr, indices, edges = g.indptr, g.indices, g.edges
    mask = rng.random(g.n) < 0.75
    yield "layers (3-regular, n=2e5)", lambda k: k.layers_from_ages(indptr, indices, ages)
    yield "components (masked, n=2e5)", lambda k: k.masked_components(g.n, edges, mask)
    yield "monotone sizes (n=2e5)", lambda k: k.monotone_sizes(indptr, indices, ages)
    yield "peeling k=3 (n=2e5)", lambda k: k.peel_min_degree(indptr, indices, 3)

    gs = grid_layers(200, seed=3)
    t4 = np.ascontiguousarray(gs.t4.state)
    yield "grid labels 401x401 (4-adj)", lambda k: k.grid_label(t4, False)
    yield "grid labels 401x401 (8-adj)", lambda k: k.grid_label(t4, True)

    target = np.ascontiguousarray(rng.random((64, 64)) < 0.6)
    yield "crossing BFS 64x64 x100", lambda k: [
        k.crossing_parents(target, 0, False) for _ in range(100)
    ]

    adj = [0] * 11
    for i in range(11):
        for j in range(i + 1, 11):
            if (i * 7 + j * 3) % 4:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    yield "exact treewidth (n=11)", lambda k: k.treewidth_exact(adj, 11)

    yield "separator sweep (n=6)", lambda k: k.separator_sweep(6)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if ck is None:
        print("compiled backend unavailable; nothing to compare")
        return 1
    print(f"{'workload':36s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, fn in workloads():
        tp, rp = timeit(lambda: fn(pyk), args.repeat)
        tc, rc = timeit(lambda: fn(ck), args.repeat)
        print(f"{name:36s} {tp * 1e3:9.1f}ms {tc * 1e3:9.1f}ms {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
