"""Age sampling, layer labels, T_k subgraphs, degeneracy, site percolation.

Ages are independent uniform [0, 1) floats; their rank order realizes a
uniformly random permutation of the vertices.  The layer of a vertex is one
plus its number of strictly younger neighbors, counting parallel edges with
multiplicity and ignoring self-loops.  T_k is the set of vertices with layer
at most k.

Two ages that collide on an edge would make the layer ill-defined, so
:func:`sample_ages` resamples the higher-indexed endpoint of any tied edge
(an event of probability ~n * 2**-53), and :func:`compute_layers` raises
:class:`TieError` if handed tied ages directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import InvalidParameterError
from .graphs import Graph, induced_subgraph
from .rng import make_rng

__all__ = [
    "sample_ages",
    "permutation_to_ages",
    "ages_to_permutation",
    "compute_layers",
    "tk_mask",
    "induced_Tk",
    "TkSubgraph",
    "expected_Tk_size",
    "degeneracy_order",
    "PeelResult",
    "site_percolation",
    "save_ages",
    "load_ages",
]


def sample_ages(g: Graph, seed) -> np.ndarray:
    """Independent uniform ages, resampled until no edge carries a tie."""
    rng = make_rng(seed)
    ages = rng.random(g.n)
    if g.m:
        u = g.edges[:, 0]
        v = g.edges[:, 1]
        nonloop = u != v
        while True:
            tied = nonloop & (ages[u] == ages[v])
            if not tied.any():
                break
            offenders = np.unique(np.maximum(u[tied], v[tied]))
            ages[offenders] = rng.random(offenders.size)
    return ages


def permutation_to_ages(perm) -> np.ndarray:
    """Ages whose rank order realizes ``perm``: position i gets age (i+1)/(n+1)."""
    perm = np.asarray(perm, dtype=np.int64)
    n = len(perm)
    if n and (np.bincount(perm, minlength=n).max(initial=0) != 1 or perm.min(initial=0) < 0
              or perm.max(initial=-1) >= n):
        raise InvalidParameterError("perm must be a bijection on 0..n-1")
    ages = np.empty(n, dtype=np.float64)
    ages[perm] = (np.arange(n) + 1) / (n + 1)
    return ages


def ages_to_permutation(ages: np.ndarray) -> np.ndarray:
    """Rank extraction: vertices in increasing age order (inverts permutation_to_ages)."""
    return np.argsort(ages, kind="stable")


def compute_layers(g: Graph, ages: np.ndarray) -> np.ndarray:
    """Layer index per vertex: 1 + number of strictly younger neighbors."""
    ages = np.ascontiguousarray(ages, dtype=np.float64)
    if len(ages) != g.n:
        raise InvalidParameterError("ages length must equal vertex count")
    return kernels.layers_from_ages(g.indptr, g.indices, ages)


def tk_mask(layers: np.ndarray, k: int) -> np.ndarray:
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    return layers <= k


class TkSubgraph(NamedTuple):
    mask: np.ndarray
    graph: Graph
    vertices: np.ndarray  # index map back into the parent graph


def induced_Tk(g: Graph, layers: np.ndarray, k: int) -> TkSubgraph:
    """Vertices of layer <= k and the subgraph they induce."""
    mask = tk_mask(layers, k)
    sub, orig = induced_subgraph(g, mask)
    return TkSubgraph(mask, sub, orig)


def expected_Tk_size(g: Graph, k: int) -> Fraction:
    """Exact expectation of |T_k|: sum over v of min(1, k / (deg(v) + 1))."""
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    degs, counts = np.unique(g.degrees, return_counts=True)
    total = Fraction(0)
    for d, c in zip(degs.tolist(), counts.tolist()):
        total += c * min(Fraction(1), Fraction(k, d + 1))
    return total


class PeelResult(NamedTuple):
    succeeded: bool
    order: np.ndarray | None
    core: np.ndarray | None  # vertices of the stuck core, None on success


def degeneracy_order(g: Graph, k: int) -> PeelResult:
    """Peel minimum-degree vertices while the minimum stays below k.

    Succeeds with a full elimination order exactly when every subgraph has a
    vertex of degree <= k-1; otherwise returns the stuck core (the maximal
    subgraph of minimum degree >= k) as witness.  Self-loops never count
    toward degrees; parallel edges count with multiplicity.
    """
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    ok, order, core_mask = kernels.peel_min_degree(g.indptr, g.indices, k)
    if ok:
        return PeelResult(True, order, None)
    return PeelResult(False, None, np.flatnonzero(core_mask))


def site_percolation(g: Graph, p: float, seed) -> np.ndarray:
    """Keep every vertex independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError("p must lie in [0, 1]")
    rng = make_rng(seed)
    return rng.random(g.n) < p


def save_ages(ages: np.ndarray, f) -> None:
    """One age per line, full precision (repr round-trips float64 exactly)."""
    own = isinstance(f, str)
    fh = open(f, "w") if own else f
    try:
        for a in ages:
            fh.write(repr(float(a)) + "\n")
    finally:
        if own:
            fh.close()


def load_ages(f) -> np.ndarray:
    own = isinstance(f, str)
    fh = open(f) if own else f
    try:
        return np.array([float(line) for line in fh if line.strip()], dtype=np.float64)
    finally:
        if own:
            fh.close()
