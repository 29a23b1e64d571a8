"""Connected components, monotone components, and cycle segment statistics.

Graph-mode components run union-find with path compression; grid modes run
BFS over the lattice under 4-neighbor or 8-neighbor (star) adjacency.  Both
label components in first-vertex order, so the two routes give identical
summaries on grid graphs (cross-checked in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import kernels
from .errors import InvalidModeError, InvalidParameterError, SizeError
from .graphs import Graph, complete_binary_tree
from .layers import compute_layers, permutation_to_ages, sample_ages
from .rng import make_rng

__all__ = [
    "ComponentSummary",
    "connected_components",
    "is_independent_set",
    "is_forest",
    "monotone_component",
    "monotone_component_sizes",
    "max_component_vs_max_monotone",
    "SegmentStats",
    "cycle_segment_stats",
    "binary_tree_survival",
]


@dataclass(frozen=True)
class ComponentSummary:
    """Component id per vertex (-1 outside the mask) plus size aggregates."""

    component_id: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def largest(self) -> int:
        return int(self.sizes.max()) if len(self.sizes) else 0

    def csv_rows(self) -> list[tuple[int, int]]:
        """(component_id, size) rows."""
        return [(i, int(s)) for i, s in enumerate(self.sizes)]

    @classmethod
    def from_labels(cls, labels: np.ndarray, count: int) -> "ComponentSummary":
        sizes = np.bincount(labels[labels >= 0], minlength=count)
        return cls(labels, sizes.astype(np.int64))


def connected_components(g: Graph, mask: np.ndarray | None, mode: str = "graph") -> ComponentSummary:
    """Components of the induced subgraph on ``mask`` under the chosen adjacency.

    mode "graph" uses g's own edges; "grid4"/"star8" use lattice adjacency and
    require a graph carrying grid coordinates.
    """
    if mask is None:
        mask = np.ones(g.n, dtype=bool)
    mask = np.ascontiguousarray(mask, dtype=bool)
    if len(mask) != g.n:
        raise InvalidParameterError("mask length must equal vertex count")
    if mode == "graph":
        labels, count = kernels.masked_components(g.n, g.edges, mask)
        return ComponentSummary.from_labels(labels, count)
    if mode in ("grid4", "star8"):
        if g.coords is None:
            raise InvalidModeError(f"mode {mode!r} requires grid coordinates")
        side = int(round(np.sqrt(g.n)))
        grid_mask = mask.reshape(side, side)  # row-major: index = ix*side + iy
        labels2d, count = kernels.grid_label(grid_mask, mode == "star8")
        return ComponentSummary.from_labels(labels2d.ravel(), count)
    raise InvalidModeError(f"unknown adjacency mode {mode!r}")


def is_independent_set(g: Graph, mask: np.ndarray | None = None) -> bool:
    """No non-loop edge joins two masked vertices (self-loops never count)."""
    if g.m == 0:
        return True
    u, v = g.edges[:, 0], g.edges[:, 1]
    nonloop = u != v
    if mask is None:
        return not nonloop.any()
    mask = np.asarray(mask, dtype=bool)
    return not (nonloop & mask[u] & mask[v]).any()


def is_forest(g: Graph) -> bool:
    """No cycle among non-loop edges; a parallel pair counts as a 2-cycle."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        if u == v:
            continue
        ru, rv = find(int(u)), find(int(v))
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def monotone_component(g: Graph, ages: np.ndarray, v: int) -> np.ndarray:
    """Vertices reachable from v along strictly age-decreasing paths (incl. v)."""
    if not 0 <= v < g.n:
        raise InvalidParameterError("vertex out of range")
    ages = np.ascontiguousarray(ages, dtype=np.float64)
    member = kernels.monotone_from(g.indptr, g.indices, ages, v)
    return np.flatnonzero(member)


def monotone_component_sizes(g: Graph, ages: np.ndarray) -> np.ndarray:
    """|C_mon(v)| for every vertex v."""
    ages = np.ascontiguousarray(ages, dtype=np.float64)
    return kernels.monotone_sizes(g.indptr, g.indices, ages)


def max_component_vs_max_monotone(g: Graph, ages: np.ndarray) -> tuple[int, int]:
    """(largest component of T_2, largest monotone component); first <= second.

    The monotone side traverses the ages upward, i.e. it is the decreasing
    traversal of the flipped ages (same distribution, since ages are uniform).
    That is the direction that dominates two-layer components pathwise: a T_2
    vertex has at most one younger neighbor, so each component is a tree whose
    unique age-minimum reaches every member along an increasing path.  With
    the downward traversal the inequality can genuinely fail (path ages
    0.9, 0.2, 0.8 give a 3-vertex component but downward maximum 2).
    """
    layers = compute_layers(g, ages)
    summary = connected_components(g, layers <= 2, mode="graph")
    if g.n:
        flipped = np.negative(np.ascontiguousarray(ages, dtype=np.float64))
        mono = int(kernels.monotone_sizes(g.indptr, g.indices, flipped).max())
    else:
        mono = 0
    return summary.largest, mono


# ---------------------------------------------------------------------------
# segment statistics on the cycle


@dataclass(frozen=True)
class SegmentStats:
    """Counts of maximal in-mask runs along the cycle, keyed by run length.

    ``degenerate`` marks the zero-probability case where the whole cycle is in
    the mask: the histogram then reports one run of length n but there is no
    segment boundary.
    """

    n: int
    histogram: dict[int, int]
    masked_count: int
    degenerate: bool

    @property
    def run_count(self) -> int:
        return sum(self.histogram.values())

    def runs_of_length(self, k: int) -> int:
        return self.histogram.get(k, 0)

    def prefix_probability(self, k: int) -> float:
        """Empirical probability that a fixed vertex starts a run of length k."""
        return self.runs_of_length(k) / self.n

    def p_hat_table(self, k_max: int) -> np.ndarray:
        """Dense [p_hat(1), ..., p_hat(k_max)] for reporting."""
        return np.array([self.prefix_probability(k) for k in range(1, k_max + 1)])

    def csv_rows(self) -> list[tuple[int, int]]:
        """(length, count) rows in increasing length order."""
        return sorted(self.histogram.items())


def _is_standard_cycle(g: Graph) -> bool:
    if g.n < 3 or g.m != g.n or g.is_multigraph:
        return False
    i = np.arange(g.n, dtype=np.int64)
    want = np.sort(np.column_stack([i, (i + 1) % g.n]), axis=1)
    got = np.sort(g.edges, axis=1)
    order_w = np.lexsort((want[:, 1], want[:, 0]))
    order_g = np.lexsort((got[:, 1], got[:, 0]))
    return bool(np.array_equal(want[order_w], got[order_g]))


def cycle_segment_stats(g: Graph, layers: np.ndarray) -> SegmentStats:
    """Run-length histogram of T_2 (layer <= 2) along a standard n-cycle."""
    if not _is_standard_cycle(g):
        raise InvalidModeError("segment statistics require the standard n-cycle")
    member = np.asarray(layers) <= 2
    n = g.n
    masked = int(member.sum())
    if masked == n:
        return SegmentStats(n, {n: 1}, masked, True)
    if masked == 0:
        return SegmentStats(n, {}, 0, False)
    first_out = int(np.argmin(member))  # an index outside the mask
    m = np.roll(member, -first_out).astype(np.int8)
    d = np.diff(m)
    starts = np.flatnonzero(d == 1) + 1
    ends = np.flatnonzero(d == -1) + 1
    if m[-1]:
        ends = np.append(ends, n)
    lengths = ends - starts
    hist = {int(k): int(c) for k, c in zip(*np.unique(lengths, return_counts=True))}
    return SegmentStats(n, hist, masked, False)


# ---------------------------------------------------------------------------
# binary tree survival


def binary_tree_survival(k: int, mode: str, seed=None, trials: int | None = None):
    """Probability that the whole complete binary tree BIN_k survives in T_2.

    Exact mode enumerates all orderings of the k-1 vertices (k-1 <= 9) and
    returns a Fraction; montecarlo mode samples ``trials`` age assignments and
    returns a float.
    """
    tree = complete_binary_tree(k)
    n = tree.n
    if mode == "exact":
        if n > 9:
            raise SizeError(f"exact enumeration infeasible for {n} vertices")
        good = 0
        total = 0
        for perm in permutations(range(n)):
            ages = permutation_to_ages(np.array(perm, dtype=np.int64))
            layers = compute_layers(tree, ages)
            total += 1
            if layers.max(initial=1) <= 2:
                good += 1
        return Fraction(good, total)
    if mode == "montecarlo":
        if not trials or trials < 1:
            raise InvalidParameterError("montecarlo mode needs trials >= 1")
        rng = make_rng(seed)
        good = 0
        for _ in range(trials):
            ages = sample_ages(tree, rng)
            layers = compute_layers(tree, ages)
            if layers.max(initial=1) <= 2:
                good += 1
        return good / trials
    raise InvalidModeError(f"unknown mode {mode!r}")
