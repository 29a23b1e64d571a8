"""The acceptance ledger: twelve frozen criteria, one verdict line each.

Each criterion is a pure function of the master seed, so the whole suite is
reproducible.  Exact criteria compare rationals; statistical criteria pin
their tolerance (3 or 4 standard errors, as frozen below) rather than
deferring it to later tuning.  Run via ``layersim accept`` or the pytest
module ``tests/test_acceptance.py``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import calibration as cal
from .components import (
    binary_tree_survival,
    is_forest,
    is_independent_set,
    max_component_vs_max_monotone,
)
from .experiments import ExperimentConfig, run
from .graphs import (
    DegreeSequence,
    complete,
    complete_binary_tree,
    configuration_model,
    cycle,
    cycle_plus_matching,
    d_ary_tree,
    grid_box,
    path,
    random_simple_regular,
    star_collection,
    subdivide_edges,
)
from .layers import (
    compute_layers,
    degeneracy_order,
    induced_Tk,
    permutation_to_ages,
    sample_ages,
)
from .rng import trial_rng
from .treewidth import exact_treewidth, molloy_reed_Q, separator_bound_sweep

__all__ = ["CriterionResult", "run_all", "CRITERIA"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: list[str]
    seconds: float

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} — {self.name} ({self.seconds:.1f}s)"


def _from_experiment(number: int, name: str, cfg: ExperimentConfig) -> CriterionResult:
    t0 = time.time()
    report = run(cfg)
    details = [v.format() for v in report.verdicts]
    return CriterionResult(number, name, report.all_passed, details, time.time() - t0)


def criterion_1(seed: int) -> CriterionResult:
    """Exact rational worst-case giant-component criterion value."""
    t0 = time.time()
    lam = {1: Fraction(21, 30), 2: Fraction(5, 30), 3: Fraction(2, 30), 4: Fraction(2, 30)}
    q = molloy_reed_Q(lam)
    ok = q == Fraction(1, 30)
    return CriterionResult(
        1, "exact Q on the worst-case smoothed degree fractions", ok,
        [f"Q = {q} (want exactly 1/30)"], time.time() - t0,
    )


def criterion_2(seed: int) -> CriterionResult:
    """Exact enumerations: run-prefix event and whole-tree survival."""
    t0 = time.time()
    details = []
    window = path(5)  # b, d interior: their cycle neighbors are inside the window
    hits = 0
    for perm in permutations(range(5)):
        layers = compute_layers(window, permutation_to_ages(np.array(perm)))
        if layers[1] == 3 and layers[3] == 3 and layers[2] <= 2:
            hits += 1
    ok1 = hits == 16
    details.append(f"length-1 prefix event: {hits}/120 orderings (want 16)")
    surv = binary_tree_survival(4, "exact")
    ok2 = surv == Fraction(2, 3)
    details.append(f"4-leaf tree survival: {surv} (want 2/3, i.e. 4 of 6 orderings)")
    ok3 = surv >= Fraction(1, 2 ** 8)
    details.append(f"survival >= 2^-8 lower bound: {float(surv):.4f} >= {2**-8:.6f}")
    return CriterionResult(
        2, "exact enumeration oracles", ok1 and ok2 and ok3, details, time.time() - t0
    )


def criterion_3(seed: int) -> CriterionResult:
    return _from_experiment(
        3, "segment statistics on the 10^5-cycle",
        ExperimentConfig(experiment="p1p2", seed=seed, trials=50, n=100_000),
    )


_FAMILY_BUILDERS = [
    ("cycle", lambda rng: cycle(101)),
    ("cycle_plus_matching", lambda rng: cycle_plus_matching(200, rng)),
    ("random_regular_3", lambda rng: configuration_model(DegreeSequence.regular(3, 200), rng)),
    ("configuration_mixed", lambda rng: configuration_model(
        DegreeSequence(((1, 40), (2, 40), (3, 40), (4, 40))), rng)),
    ("complete_binary_tree", lambda rng: complete_binary_tree(128)),
    ("grid_box", lambda rng: grid_box(7)),
    ("star_collection", lambda rng: star_collection(12, 12)),
    ("d_ary_tree", lambda rng: d_ary_tree(3, 4)),
    ("subdivided_regular", lambda rng: subdivide_edges(random_simple_regular(3, 60, rng))[0]),
]


def criterion_4(seed: int) -> CriterionResult:
    """Structural property sweep over sampled (graph, ages) pairs."""
    t0 = time.time()
    per_family = 112  # 9 families -> 1008 pairs
    pairs = 0
    bad_bounds = bad_t1 = bad_t2 = bad_degen = bad_mono = 0
    for fam_idx, (fam, build) in enumerate(_FAMILY_BUILDERS):
        for t in range(per_family):
            rng = trial_rng(seed, fam_idx, t)
            g = build(rng)
            ages = sample_ages(g, rng)
            layers = compute_layers(g, ages)
            pairs += 1
            loops = g.edges[g.edges[:, 0] == g.edges[:, 1], 0]
            hi = g.degrees.copy()
            if len(loops):
                hi -= 2 * np.bincount(loops, minlength=g.n)
            hi += 1
            if ((layers < 1) | (layers > hi)).any():
                bad_bounds += 1
            if not is_independent_set(g, layers <= 1):
                bad_t1 += 1
            if not is_forest(induced_Tk(g, layers, 2).graph):
                bad_t2 += 1
            for k in range(1, int(hi.max(initial=1)) + 1):
                if not degeneracy_order(induced_Tk(g, layers, k).graph, k).succeeded:
                    bad_degen += 1
                    break
            largest_t2, largest_mono = max_component_vs_max_monotone(g, ages)
            if largest_t2 > largest_mono:
                bad_mono += 1
    details = [
        f"{pairs} sampled pairs across {len(_FAMILY_BUILDERS)} families",
        f"layer-bound violations: {bad_bounds} (want 0)",
        f"first-layer edges: {bad_t1} (want 0)",
        f"two-layer cycles: {bad_t2} (want 0)",
        f"peeling failures over k = 1..max_degree+1: {bad_degen} (want 0)",
        f"monotone-domination violations: {bad_mono} (want 0)",
    ]
    ok = not (bad_bounds or bad_t1 or bad_t2 or bad_degen or bad_mono)
    return CriterionResult(4, "layer/degeneracy property suite", ok, details, time.time() - t0)


def criterion_5(seed: int) -> CriterionResult:
    """Expected-size formula across three families."""
    t0 = time.time()
    details = []
    ok = True
    for sub_seed, kwargs in enumerate([
        dict(family="cycle_plus_matching", n=10_000, k=3),
        dict(family="grid_box", family_params={"half_width": 40}, k=2),
        dict(family="star_collection", family_params={"star_count": 60, "star_size": 30}, k=1),
    ]):
        report = run(ExperimentConfig(
            experiment="tk_size", seed=seed + sub_seed, trials=12, **kwargs))
        details.extend(v.format() for v in report.verdicts)
        ok = ok and report.all_passed
    return CriterionResult(5, "expected T_k size formula", ok, details, time.time() - t0)


def criterion_6(seed: int) -> CriterionResult:
    return _from_experiment(
        6, "T_3 giant component on cycle-plus-matching",
        ExperimentConfig(experiment="giant_t3", seed=seed, trials=20, n=10_000,
                         delta=cal.GIANT_T3_DELTA),
    )


def criterion_7(seed: int) -> CriterionResult:
    t0 = time.time()
    sup = run(ExperimentConfig(experiment="perc_super", seed=seed, trials=20, n=10_000, p=0.6))
    sub = run(ExperimentConfig(experiment="perc_sub", seed=seed, trials=20, n=10_000, p=0.3))
    details = [v.format() for v in sup.verdicts] + [v.format() for v in sub.verdicts]
    return CriterionResult(
        7, "percolated random regular graphs, both phases",
        sup.all_passed and sub.all_passed, details, time.time() - t0,
    )


def criterion_8(seed: int) -> CriterionResult:
    return _from_experiment(
        8, "monotone component of a pinned-age tree root",
        ExperimentConfig(experiment="monotone_tree", seed=seed, trials=100_000,
                         d=2, depth=14, a=1.0),
    )


def criterion_9(seed: int) -> CriterionResult:
    t0 = time.time()
    inv = run(ExperimentConfig(experiment="grid_invariants", seed=seed, trials=1000, n=100))
    dual = run(ExperimentConfig(experiment="crossing_duality", seed=seed, trials=100_002))
    details = [v.format() for v in inv.verdicts] + [v.format() for v in dual.verdicts]
    return CriterionResult(
        9, "grid invariants and crossing duality",
        inv.all_passed and dual.all_passed, details, time.time() - t0,
    )


def criterion_10(seed: int) -> CriterionResult:
    return _from_experiment(
        10, "box-scaling stability of the fourth layer",
        ExperimentConfig(experiment="t4_box", seed=seed, trials=120,
                         sizes=[50, 100, 200], epsilon=0.5),
    )


def criterion_11(seed: int) -> CriterionResult:
    """Treewidth oracle spot values and the exhaustive separator sweep."""
    t0 = time.time()
    details = []
    ok = True
    for name, g, want in [
        ("7-vertex binary tree", d_ary_tree(2, 2), 1),
        ("path of 6", path(6), 1),
        ("cycle of 8", cycle(8), 2),
        ("complete graph on 4", complete(4), 3),
        ("3x3 grid", grid_box(1), 3),
    ]:
        got = exact_treewidth(g)
        details.append(f"treewidth({name}) = {got} (want {want})")
        ok = ok and got == want
    total_checked = 0
    for n in range(1, 8):
        graphs, connected, violations = separator_bound_sweep(n)
        total_checked += connected
        if violations:
            details.append(f"n={n}: {violations} separator-bound violations (want 0)")
            ok = False
    details.append(
        f"balanced separator of size <= treewidth+1 verified on all "
        f"{total_checked} labeled connected graphs with up to 7 vertices"
    )
    return CriterionResult(11, "treewidth oracle cross-checks", ok, details, time.time() - t0)


def criterion_12(seed: int) -> CriterionResult:
    return _from_experiment(
        12, "two-stage exposure retention law",
        ExperimentConfig(experiment="two_stage_retention", seed=seed, trials=100_000,
                         p=0.6, q=0.8),
    )


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
]


def run_all(seed: int = cal.DEFAULT_SEED, echo=None) -> list[CriterionResult]:
    """Run every criterion; ``echo`` (e.g. print) receives one line per verdict."""
    results = []
    for fn in CRITERIA:
        res = fn(seed)
        results.append(res)
        if echo:
            echo(res.format())
            for line in res.details:
                echo(f"    {line}")
    return results
