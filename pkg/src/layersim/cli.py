"""Command-line interface.

Subcommands: generate, layers, components, percolate, experiment, accept,
replay.  Exit code 0 means every verdict passed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import calibration as cal
from .acceptance import run_all
from .components import connected_components
from .errors import LayersimError
from .experiments import (
    FAMILIES,
    ExperimentConfig,
    experiment_names,
    make_graph,
    run,
)
from .kernels import backend_name
from .layers import compute_layers, expected_Tk_size, sample_ages, save_ages, site_percolation
from .graphs import load_graph, save_graph
from .replay import replay


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=cal.DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--out", type=str, default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layersim",
        description="Random-order layer sampling, giant components, and grid percolation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a graph family as an edge list")
    g.add_argument("--family", required=True, choices=sorted(FAMILIES))
    g.add_argument("--params", type=str, default=None,
                   help='extra family parameters as JSON, e.g. \'{"star_count": 3}\'')
    _add_common(g)

    l = sub.add_parser("layers", help="sample ages and report layer statistics")
    l.add_argument("--graph", required=True, help="edge-list file")
    l.add_argument("--ages-out", type=str, default=None, help="write the sampled ages")
    _add_common(l)

    c = sub.add_parser("components", help="component summary of an edge-list graph")
    c.add_argument("--graph", required=True)
    c.add_argument("--mode", default="graph", choices=["graph", "grid4", "star8"])
    _add_common(c)

    pc = sub.add_parser("percolate", help="site percolation and largest component")
    pc.add_argument("--graph", required=True)
    _add_common(pc)

    e = sub.add_parser("experiment", help="run a named experiment")
    e.add_argument("name", nargs="?", default=None,
                   help=f"one of: {', '.join(experiment_names())}")
    e.add_argument("--config", type=str, default=None, help="JSON config file")
    e.add_argument("--list", action="store_true", help="list experiment names")
    _add_common(e)

    a = sub.add_parser("accept", help="run the full acceptance ledger")
    a.add_argument("--seed", type=int, default=cal.DEFAULT_SEED)

    r = sub.add_parser("replay", help="re-evaluate a counterexample bundle")
    r.add_argument("bundle")
    return parser


def _cmd_generate(args) -> int:
    params = json.loads(args.params) if args.params else {}
    if args.n is not None:
        params.setdefault("n", args.n)
    g = make_graph(args.family, params, args.seed)
    if args.out:
        save_graph(g, args.out)
    else:
        save_graph(g, sys.stdout)
    return 0


def _cmd_layers(args) -> int:
    g = load_graph(args.graph)
    ages = sample_ages(g, args.seed)
    layers = compute_layers(g, ages)
    if args.ages_out:
        save_ages(ages, args.ages_out)
    k = args.k or 3
    hist = {int(v): int(c) for v, c in zip(*np.unique(layers, return_counts=True))}
    summary = {
        "n": g.n,
        "k": k,
        "tk_size": int((layers <= k).sum()),
        "tk_expected": float(expected_Tk_size(g, k)),
        "layer_histogram": hist,
        "seed": args.seed,
    }
    print(json.dumps(summary, sort_keys=True, indent=2))
    return 0


def _cmd_components(args) -> int:
    g = load_graph(args.graph)
    summary = connected_components(g, None, mode=args.mode)
    lines = ["component_id,size"] + [f"{i},{s}" for i, s in summary.csv_rows()]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_percolate(args) -> int:
    g = load_graph(args.graph)
    p = args.p if args.p is not None else 0.5
    mask = site_percolation(g, p, args.seed)
    summary = connected_components(g, mask, mode="graph")
    out = {
        "n": g.n,
        "p": p,
        "kept": int(mask.sum()),
        "components": summary.count,
        "largest": summary.largest,
        "largest_fraction": summary.largest / g.n if g.n else 0.0,
        "seed": args.seed,
    }
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


def _cmd_experiment(args) -> int:
    if args.list:
        for name in experiment_names():
            print(name)
        return 0
    if args.name is None:
        print("experiment name required (or --list)", file=sys.stderr)
        return 2
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    data.setdefault("experiment", args.name)
    for key in ("seed", "trials", "n", "k", "p", "q", "epsilon", "delta", "out"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    data.setdefault("seed", cal.DEFAULT_SEED)
    data.setdefault("trials", 20)
    report = run(ExperimentConfig.from_dict(data))
    for v in report.verdicts:
        print(v.format())
    if not report.verdicts:
        print("(no verdicts: exploratory experiment)")
    print(json.dumps(report.aggregates, sort_keys=True, indent=2, default=str))
    return 0 if report.all_passed else 1


def _cmd_accept(args) -> int:
    print(f"kernel backend: {backend_name()}")
    results = run_all(args.seed, echo=print)
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def _cmd_replay(args) -> int:
    diag = replay(args.bundle)
    print(diag.format())
    return 1 if diag.violated else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "layers": _cmd_layers,
        "components": _cmd_components,
        "percolate": _cmd_percolate,
        "experiment": _cmd_experiment,
        "accept": _cmd_accept,
        "replay": _cmd_replay,
    }
    try:
        return handlers[args.command](args)
    except LayersimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
