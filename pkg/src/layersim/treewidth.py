"""Giant-component criteria and small-graph treewidth oracles.

The Molloy-Reed quantity Q = sum over degrees of lambda_i * i * (i - 2) is
kept in exact rational arithmetic so sign checks are never at the mercy of
floating point.  The treewidth oracle enumerates elimination prefixes with
memoization (feasible to 12 vertices); its separator cross-check sweeps every
labeled connected graph on up to 7 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import kernels
from .components import connected_components
from .errors import InvalidParameterError, SizeError
from .graphs import Graph, induced_subgraph
from .layers import compute_layers, sample_ages, site_percolation
from .rng import make_rng

__all__ = [
    "molloy_reed_Q",
    "molloy_reed_from_degrees",
    "smooth_degree_pair",
    "smooth_until_balanced",
    "AuxiliaryH",
    "build_auxiliary_H",
    "GiantTrial",
    "giant_component_trial",
    "exact_treewidth",
    "balanced_separator_exists",
    "separator_bound_sweep",
    "TwoStageRow",
    "two_stage_treewidth_evidence",
]


def molloy_reed_Q(fractions: dict[int, Fraction]) -> Fraction:
    """Exact sum of lambda_i * i * (i - 2) over the degree fractions.

    Values must be exact rationals (Fraction, int, or numeric strings) summing
    to 1.
    """
    lam = {int(d): Fraction(v) for d, v in fractions.items()}
    if any(d < 0 for d in lam):
        raise InvalidParameterError("degrees must be non-negative")
    if sum(lam.values(), Fraction(0)) != 1:
        raise InvalidParameterError("fractions must sum to 1 exactly")
    return sum((v * d * (d - 2) for d, v in lam.items()), Fraction(0))


def molloy_reed_from_degrees(degrees: np.ndarray) -> Fraction:
    """Q of an observed degree sequence (empty input counts as Q = 0)."""
    degrees = np.asarray(degrees)
    n = len(degrees)
    if n == 0:
        return Fraction(0)
    vals, counts = np.unique(degrees, return_counts=True)
    return sum(
        (Fraction(int(c), n) * int(d) * (int(d) - 2) for d, c in zip(vals, counts)),
        Fraction(0),
    )


def smooth_degree_pair(d: int, d_prime: int) -> tuple[tuple[int, int], int]:
    """Replace degrees (d, d') with (d+1, d'-1); returns the pair and the exact
    decrease 2*(d'-d-1) of the unnormalized Q sum."""
    if d_prime < d + 2:
        raise InvalidParameterError("smoothing requires d' >= d + 2")
    return (d + 1, d_prime - 1), 2 * (d_prime - d - 1)


def smooth_until_balanced(degrees) -> tuple[np.ndarray, int]:
    """Iterate pair smoothing to the fixpoint where degrees differ by <= 1.

    Preserves vertex count and degree sum; returns (degrees, total Q decrease).
    """
    deg = np.asarray(degrees, dtype=np.int64).copy()
    if len(deg) == 0:
        return deg, 0
    total = 0
    while True:
        lo = int(np.argmin(deg))
        hi = int(np.argmax(deg))
        if deg[hi] < deg[lo] + 2:
            return deg, total
        (a, b), delta = smooth_degree_pair(int(deg[lo]), int(deg[hi]))
        deg[lo], deg[hi] = a, b
        total += delta


# ---------------------------------------------------------------------------
# the auxiliary multigraph built from cycle segments plus a matching


@dataclass(frozen=True)
class AuxiliaryH:
    """Contraction of a cycle sample against a perfect matching.

    Each run of consecutive layer-<=2 cycle vertices becomes one vertex of
    degree equal to its size; every cycle vertex outside those runs becomes a
    degree-1 vertex.  The matching edges, projected onto these vertices,
    realize the multigraph.
    """

    u1_degrees: np.ndarray
    u2_count: int
    graph: Graph
    h_vertex_of: np.ndarray  # cycle vertex -> vertex of the multigraph

    @property
    def u1_count(self) -> int:
        return len(self.u1_degrees)

    def degree_sequence(self) -> np.ndarray:
        """Sorted degrees; depends only on the layer labels, not the matching."""
        return np.sort(
            np.concatenate([self.u1_degrees, np.ones(self.u2_count, dtype=np.int64)])
        )


def build_auxiliary_H(cycle_layers: np.ndarray, matching: np.ndarray) -> AuxiliaryH:
    """Project a perfect matching onto the layer-<=2 runs of a cycle sample.

    ``cycle_layers`` must come from the standard n-cycle (cycle edges only);
    ``matching`` is an (n/2, 2) perfect matching on the n cycle vertices.
    """
    layers = np.asarray(cycle_layers)
    n = len(layers)
    matching = np.asarray(matching, dtype=np.int64).reshape(-1, 2)
    flat = np.sort(matching.ravel())
    if not np.array_equal(flat, np.arange(n, dtype=np.int64)):
        raise InvalidParameterError("matching must cover every cycle vertex exactly once")
    member = layers <= 2
    h_of = np.empty(n, dtype=np.int64)
    if member.all():
        u1_degrees = np.array([n], dtype=np.int64)
        h_of[:] = 0
        n_runs = 1
        out = np.array([], dtype=np.int64)
    else:
        first_out = int(np.argmin(member))
        rolled = np.roll(member, -first_out)
        # run index per rolled position, in order of appearance
        starts = np.flatnonzero(np.diff(np.concatenate([[0], rolled.view(np.int8)])) == 1)
        run_idx = np.cumsum(np.diff(np.concatenate([[0], rolled.view(np.int8)])) == 1) - 1
        n_runs = len(starts)
        lengths = np.bincount(run_idx[rolled], minlength=n_runs) if n_runs else np.array([], int)
        u1_degrees = lengths.astype(np.int64)
        positions = (np.arange(n) - first_out) % n  # original index -> rolled position
        out = np.flatnonzero(~member)
        h_of[member] = run_idx[positions[member]]
        h_of[out] = n_runs + np.arange(len(out))
    h_edges = h_of[matching]
    h = Graph.from_edges(n_runs + len(out), h_edges)
    return AuxiliaryH(u1_degrees, len(out), h, h_of)


# ---------------------------------------------------------------------------
# giant-component trials


class GiantTrial(NamedTuple):
    fraction: float
    passed: bool
    mask: np.ndarray


def giant_component_trial(g: Graph, mask_source, delta: float, seed) -> GiantTrial:
    """Sample a vertex mask and test the largest component against delta * n.

    ``mask_source`` is ("tk", k) for the first k layers or ("percolation", p)
    for independent retention.  Fractions are relative to g's vertex count so
    runs compare across sizes.
    """
    if not 0 < delta < 1:
        raise InvalidParameterError("delta must lie in (0, 1)")
    kind = mask_source[0]
    if kind == "tk":
        ages = sample_ages(g, seed)
        mask = compute_layers(g, ages) <= int(mask_source[1])
    elif kind == "percolation":
        mask = site_percolation(g, float(mask_source[1]), seed)
    else:
        raise InvalidParameterError(f"unknown mask source {mask_source!r}")
    summary = connected_components(g, mask, mode="graph")
    fraction = summary.largest / g.n if g.n else 0.0
    return GiantTrial(fraction, fraction >= delta, mask)


# ---------------------------------------------------------------------------
# exact treewidth oracle (n <= 12)


def _adjacency_bits(g: Graph) -> list[int]:
    adj = [0] * g.n
    for u, v in g.edges.tolist():
        if u != v:  # simplify: loops and multiplicities are treewidth-irrelevant
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def exact_treewidth(g: Graph) -> int:
    """Exact treewidth by elimination-order dynamic programming (n <= 12)."""
    if g.n > 12:
        raise SizeError("exact treewidth oracle supports at most 12 vertices")
    return kernels.treewidth_exact(_adjacency_bits(g), g.n)


def balanced_separator_exists(g: Graph, max_size: int) -> bool:
    """Is there a set of <= max_size vertices whose removal leaves only
    components of size <= 2n/3?"""
    if g.n > 12:
        raise SizeError("separator search supports at most 12 vertices")
    return kernels.balanced_separator_exists(_adjacency_bits(g), g.n, max_size)


def separator_bound_sweep(n: int) -> tuple[int, int, int]:
    """Exhaustively verify, over all labeled connected graphs on n <= 7
    vertices, that a balanced separator of size <= treewidth + 1 exists.

    Returns (graphs enumerated, connected graphs checked, violations)."""
    return kernels.separator_sweep(n)


# ---------------------------------------------------------------------------
# two-stage exposure evidence


@dataclass(frozen=True)
class TwoStageRow:
    trial: int
    stage: str  # "q" or "p"
    kept: int
    largest_fraction: float
    q_value: float
    passed: bool | None
    treewidth: int | None  # exact treewidth of the stage subgraph when n <= 12


def two_stage_treewidth_evidence(
    g: Graph, p: float, q: float, trials: int, seed, delta: float | None = None
) -> list[TwoStageRow]:
    """Expose percolation in two stages and report giant-component evidence.

    Stage q keeps each vertex with probability q; stage p keeps each survivor
    with probability p/q, so the composition is plain percolation at p.  Rows
    carry the largest-component fraction and the Molloy-Reed Q of the realized
    stage degree sequence; on graphs of at most 12 vertices the exact
    treewidth of the stage-q subgraph is included.
    """
    if not 0 < p < q <= 1:
        raise InvalidParameterError("need 0 < p < q <= 1")
    rng = make_rng(seed)
    rows: list[TwoStageRow] = []
    for t in range(trials):
        mask_q = site_percolation(g, q, rng)
        mask_p = mask_q & site_percolation(g, p / q, rng)
        for stage, mask in (("q", mask_q), ("p", mask_p)):
            summary = connected_components(g, mask, mode="graph")
            sub, _ = induced_subgraph(g, mask)
            frac = summary.largest / g.n if g.n else 0.0
            tw = None
            if stage == "q" and g.n <= 12:
                tw = exact_treewidth(sub)
            rows.append(
                TwoStageRow(
                    trial=t,
                    stage=stage,
                    kept=int(mask.sum()),
                    largest_fraction=frac,
                    q_value=float(molloy_reed_from_degrees(sub.degrees)),
                    passed=None if delta is None else frac >= delta,
                    treewidth=tw,
                )
            )
    return rows
