"""Counterexample serialization and replay.

A counterexample bundle is one plain-text file holding the named invariant,
the graph edge list, and the age assignment:

    invariant tk_degenerate k=3
    graph
    5 4
    0 1
    ...
    ages
    0.5234...

Replaying re-evaluates the invariant on exactly those inputs and reports the
violation (or its absence) deterministically.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .components import is_forest, is_independent_set, max_component_vs_max_monotone
from .errors import InvalidParameterError, TieError
from .graphs import Graph, load_graph, save_graph
from .layers import compute_layers, degeneracy_order, induced_Tk, load_ages, save_ages

__all__ = ["Diagnosis", "save_counterexample", "replay", "invariant_names"]


@dataclass(frozen=True)
class Diagnosis:
    invariant: str
    violated: bool
    message: str

    def format(self) -> str:
        status = "VIOLATION" if self.violated else "no violation"
        return f"{self.invariant}: {status} — {self.message}"


def _nonloop_degrees(g: Graph) -> np.ndarray:
    deg = g.degrees.copy()
    loops = g.edges[g.edges[:, 0] == g.edges[:, 1], 0]
    if len(loops):
        deg -= 2 * np.bincount(loops, minlength=g.n)
    return deg


def _check_layer_bounds(g, ages, params):
    layers = compute_layers(g, ages)
    hi = _nonloop_degrees(g) + 1
    bad = np.flatnonzero((layers < 1) | (layers > hi))
    if bad.size:
        v = int(bad[0])
        return True, f"vertex {v} has layer {layers[v]} outside [1, {hi[v]}]"
    return False, "all layers within [1, degree+1]"


def _check_t1_independent(g, ages, params):
    layers = compute_layers(g, ages)
    mask = layers <= 1
    if not is_independent_set(g, mask):
        u, v = next(
            (int(a), int(b)) for a, b in g.edges if a != b and mask[a] and mask[b]
        )
        return True, f"first layer spans edge ({u}, {v})"
    return False, f"first layer of size {int(mask.sum())} spans no edge"


def _check_t2_forest(g, ages, params):
    layers = compute_layers(g, ages)
    sub = induced_Tk(g, layers, 2).graph
    if not is_forest(sub):
        return True, "first two layers contain a cycle"
    return False, f"first two layers ({sub.n} vertices) are acyclic"


def _check_tk_degenerate(g, ages, params):
    k = int(params.get("k", 3))
    layers = compute_layers(g, ages)
    tk = induced_Tk(g, layers, k)
    res = degeneracy_order(tk.graph, k)
    if not res.succeeded:
        return True, f"stuck core of {len(res.core)} vertices at k={k}"
    return False, f"peeling order covers all {tk.graph.n} vertices at k={k}"


def _check_monotone_dominates(g, ages, params):
    largest_t2, largest_mono = max_component_vs_max_monotone(g, ages)
    if largest_t2 > largest_mono:
        return True, f"T2 component {largest_t2} exceeds max monotone {largest_mono}"
    return False, f"largest T2 component {largest_t2} <= max monotone {largest_mono}"


def _check_no_edge_ties(g, ages, params):
    compute_layers(g, ages)  # raises TieError on a tie
    return False, "no edge carries an age tie"


_INVARIANTS = {
    "layer_bounds": _check_layer_bounds,
    "t1_independent": _check_t1_independent,
    "t2_forest": _check_t2_forest,
    "tk_degenerate": _check_tk_degenerate,
    "monotone_dominates_t2": _check_monotone_dominates,
    "no_edge_ties": _check_no_edge_ties,
}


def invariant_names() -> list[str]:
    return sorted(_INVARIANTS)


def save_counterexample(path: str, invariant: str, g: Graph, ages: np.ndarray,
                        params: dict | None = None) -> None:
    if invariant not in _INVARIANTS:
        raise InvalidParameterError(f"unknown invariant {invariant!r}")
    with open(path, "w") as fh:
        head = invariant
        for key, val in sorted((params or {}).items()):
            head += f" {key}={val}"
        fh.write(f"invariant {head}\n")
        fh.write("graph\n")
        save_graph(g, fh)
        fh.write("ages\n")
        save_ages(ages, fh)


def replay(path: str) -> Diagnosis:
    """Re-evaluate the bundle's invariant; deterministic for a fixed file."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("invariant "):
        raise InvalidParameterError("bundle must start with an 'invariant' line")
    parts = lines[0].split()[1:]
    if not parts:
        raise InvalidParameterError("missing invariant name")
    name, params = parts[0], {}
    for tok in parts[1:]:
        key, _, val = tok.partition("=")
        params[key] = val
    if name not in _INVARIANTS:
        raise InvalidParameterError(f"unknown invariant {name!r}")
    try:
        gi = lines.index("graph")
        ai = lines.index("ages")
    except ValueError:
        raise InvalidParameterError("bundle needs 'graph' and 'ages' sections") from None
    g = load_graph(io.StringIO("\n".join(lines[gi + 1: ai]) + "\n"))
    ages = load_ages(io.StringIO("\n".join(lines[ai + 1:]) + "\n"))
    if len(ages) != g.n:
        raise InvalidParameterError("ages length does not match vertex count")
    try:
        violated, message = _INVARIANTS[name](g, ages, params)
    except TieError as exc:
        return Diagnosis(name, True, f"tie error: {exc}")
    return Diagnosis(name, violated, message)
