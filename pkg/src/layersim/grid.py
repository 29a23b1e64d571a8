"""Finite-box lattice machinery: layer configurations, parity, crossings,
surrounding cycles, and the box-scaling experiment.

Configurations live on the box [-n, n]^2 with state indexed ``[x+n, y+n]``.
The box induces reduced degrees on the rim, so rim vertices always land in
the first four layers; statistics that should approximate the full plane are
therefore computed on an interior margin (see :func:`margin_bounds`), with
whole-box numbers reported alongside, flagged as raw.

The finite stand-in for "the origin lies in an unbounded cluster" is
origin-to-boundary connectivity, the standard finite-volume proxy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import InvalidParameterError, SizeError
from .rng import make_rng

__all__ = [
    "GridConfiguration",
    "GridSample",
    "CrossingRectangle",
    "ThetaEstimate",
    "grid_layers",
    "parity_split",
    "phi_isomorphism_check",
    "coupling_domination_check",
    "find_crossing",
    "verify_crossing",
    "crossing_duality_check",
    "surrounded_check",
    "estimate_theta",
    "t4_box_experiment",
    "T4BoxRow",
    "annulus_circuit_check",
    "annulus_rectangles",
    "random_configuration",
    "margin_bounds",
    "dump_grid_text",
]


@dataclass(frozen=True)
class GridConfiguration:
    """Open/closed state over the box [-n, n]^2; state[x+n, y+n]."""

    half_width: int
    state: np.ndarray
    source: str  # "layers-t4" | "layers-l5" | "independent-p"

    def __post_init__(self):
        side = 2 * self.half_width + 1
        st = np.array(self.state, dtype=bool, order="C")  # own copy; frozen below
        if st.shape != (side, side):
            raise InvalidParameterError("state must cover the full box")
        st.flags.writeable = False
        object.__setattr__(self, "state", st)

    @property
    def side(self) -> int:
        return 2 * self.half_width + 1

    def open_at(self, x: int, y: int) -> bool:
        n = self.half_width
        return bool(self.state[x + n, y + n])

    def open_count(self) -> int:
        return int(self.state.sum())


class GridSample(NamedTuple):
    ages: np.ndarray     # (side, side) float64
    layers: np.ndarray   # (side, side) int64, box-induced degrees
    t4: GridConfiguration
    l5: GridConfiguration


def _grid_resample_ties(ages: np.ndarray, rng: np.random.Generator) -> None:
    """Resample the lexicographically-later cell of any equal-age neighbor pair."""
    while True:
        bad = np.zeros(ages.shape, dtype=bool)
        bad[1:, :] |= ages[1:, :] == ages[:-1, :]
        bad[:, 1:] |= ages[:, 1:] == ages[:, :-1]
        if not bad.any():
            return
        ages[bad] = rng.random(int(bad.sum()))


def _grid_layer_counts(ages: np.ndarray) -> np.ndarray:
    """Layer per cell: 1 + number of strictly younger in-box neighbors."""
    younger = np.zeros(ages.shape, dtype=np.int64)
    younger[1:, :] += ages[:-1, :] < ages[1:, :]
    younger[:-1, :] += ages[1:, :] < ages[:-1, :]
    younger[:, 1:] += ages[:, :-1] < ages[:, 1:]
    younger[:, :-1] += ages[:, 1:] < ages[:, :-1]
    return younger + 1


def grid_layers(half_width: int, seed) -> GridSample:
    """Sample ages on the box and split into the T_4 and L_5 configurations.

    Boundary cells have reduced in-box degree, hence layer at most 4; only
    interior cells can reach layer 5, so the T_4 and L_5 masks partition the
    box.
    """
    if half_width < 2:
        raise InvalidParameterError("grid_layers needs half_width >= 2")
    rng = make_rng(seed)
    side = 2 * half_width + 1
    ages = rng.random((side, side))
    _grid_resample_ties(ages, rng)
    layers = _grid_layer_counts(ages)
    t4 = GridConfiguration(half_width, layers <= 4, "layers-t4")
    l5 = GridConfiguration(half_width, layers == 5, "layers-l5")
    return GridSample(ages, layers, t4, l5)


def parity_split(config: GridConfiguration) -> tuple[np.ndarray, np.ndarray]:
    """Masks of the open cells with even and odd coordinate-sum parity."""
    side = config.side
    ix, iy = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    even = (ix + iy) % 2 == 0  # (x+y) and (ix+iy) share parity: offset is 2n
    return config.state & even, config.state & ~even


def phi_isomorphism_check(half_width: int) -> bool:
    """Verify on a finite window that (u, v) -> (u+v, u-v) carries 4-adjacency
    onto diagonal adjacency of the even sublattice, edge for edge."""
    w = half_width
    pts = [(u, v) for u in range(-w, w + 1) for v in range(-w, w + 1)]
    phi = {p: (p[0] + p[1], p[0] - p[1]) for p in pts}
    image = set(phi.values())
    if len(image) != len(pts):
        return False
    if any((a + b) % 2 for a, b in image):
        return False  # image must be even vertices
    # forward: 4-adjacent pairs map to even star-adjacent pairs
    fwd_edges = set()
    for (u, v) in pts:
        for du, dv in ((1, 0), (0, 1)):
            other = (u + du, v + dv)
            if other in phi:
                a, b = phi[(u, v)]
                c, d = phi[other]
                if max(abs(a - c), abs(b - d)) != 1:
                    return False
                fwd_edges.add(frozenset([phi[(u, v)], phi[other]]))
    # backward: star-adjacent even pairs inside the image pull back to 4-adjacent
    back_edges = set()
    for p in image:
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == dy == 0:
                    continue
                q = (p[0] + dx, p[1] + dy)
                if q in image:
                    back_edges.add(frozenset([p, q]))
    if back_edges != fwd_edges:
        return False
    inv = {img: pre for pre, img in phi.items()}
    for e in back_edges:
        a, b = tuple(e)
        pa, pb = inv[a], inv[b]
        if abs(pa[0] - pb[0]) + abs(pa[1] - pb[1]) != 1:
            return False
    return True


def coupling_domination_check(ages: np.ndarray, l5: GridConfiguration) -> np.ndarray:
    """Coordinates of open L_5 cells whose up-neighbor is older — always empty.

    A cell reaches layer 5 only if all four in-box neighbors are younger, so
    age(v) > age(v + (0, 1)) holds deterministically; a non-empty result
    indicates corrupted inputs.
    """
    if ages.shape != l5.state.shape:
        raise InvalidParameterError("ages and configuration shapes differ")
    n = l5.half_width
    viol = l5.state[:, :-1] & (ages[:, :-1] < ages[:, 1:])
    xs, ys = np.nonzero(viol)
    return np.column_stack([xs - n, ys - n])


# ---------------------------------------------------------------------------
# crossings


@dataclass(frozen=True)
class CrossingRectangle:
    """Axis-aligned rectangle with corners (v1, v2) and (u1, u2), v_i < u_i.

    Sides: L is the x = v1 face, R the x = u1 face, D the y = v2 face and U
    the y = u2 face.
    """

    v1: int
    v2: int
    u1: int
    u2: int

    def __post_init__(self):
        if self.v1 >= self.u1 or self.v2 >= self.u2:
            raise InvalidParameterError("rectangle must have positive extent both ways")

    @property
    def width(self) -> int:
        return self.u1 - self.v1 + 1

    @property
    def height(self) -> int:
        return self.u2 - self.v2 + 1

    def contains(self, x: int, y: int) -> bool:
        return self.v1 <= x <= self.u1 and self.v2 <= y <= self.u2


def _rect_view(config: GridConfiguration, rect: CrossingRectangle) -> np.ndarray:
    n = config.half_width
    if not (-n <= rect.v1 and rect.u1 <= n and -n <= rect.v2 and rect.u2 <= n):
        raise InvalidParameterError("rectangle exceeds the box")
    return config.state[rect.v1 + n: rect.u1 + n + 1, rect.v2 + n: rect.u2 + n + 1]


def find_crossing(
    config: GridConfiguration,
    rect: CrossingRectangle,
    direction: str,
    adjacency: str = "grid4",
    polarity: str = "open",
) -> list[tuple[int, int]] | None:
    """Search for a crossing path of the rectangle; None when there is none.

    direction "LR" connects the x = v1 face to the x = u1 face, "DU" the
    y = v2 face to the y = u2 face; adjacency is "grid4" or "star8"; polarity
    selects open or closed cells.  The returned path starts on the source
    face, ends on the target face, and is verifiable step by step.
    """
    if direction not in ("LR", "DU"):
        raise InvalidParameterError("direction must be LR or DU")
    if adjacency not in ("grid4", "star8"):
        raise InvalidParameterError("adjacency must be grid4 or star8")
    if polarity not in ("open", "closed"):
        raise InvalidParameterError("polarity must be open or closed")
    sub = _rect_view(config, rect)
    target = np.ascontiguousarray(sub if polarity == "open" else ~sub)
    axis = 0 if direction == "LR" else 1
    end, parents = kernels.crossing_parents(target, axis, adjacency == "star8")
    if end < 0:
        return None
    h = rect.height
    path = []
    cur = int(end)
    while cur != -1:
        path.append((rect.v1 + cur // h, rect.v2 + cur % h))
        cur = int(parents[cur])
    path.reverse()
    return path


def verify_crossing(
    config: GridConfiguration,
    rect: CrossingRectangle,
    direction: str,
    adjacency: str,
    polarity: str,
    path: list[tuple[int, int]],
) -> bool:
    """Re-check a returned path: containment, polarity, adjacency, endpoints."""
    if not path:
        return False
    want_open = polarity == "open"
    for x, y in path:
        if not rect.contains(x, y) or config.open_at(x, y) != want_open:
            return False
    for (x1, y1), (x2, y2) in zip(path, path[1:]):
        dx, dy = abs(x1 - x2), abs(y1 - y2)
        if adjacency == "grid4" and dx + dy != 1:
            return False
        if adjacency == "star8" and max(dx, dy) != 1:
            return False
    (sx, sy), (ex, ey) = path[0], path[-1]
    if direction == "LR":
        return sx == rect.v1 and ex == rect.u1
    return sy == rect.v2 and ey == rect.u2


def crossing_duality_check(config: GridConfiguration, rect: CrossingRectangle) -> bool:
    """At least one side of the crossing dichotomy holds, in both orientations:
    an open 4-crossing across, or a closed star-crossing the other way."""
    lr_open = find_crossing(config, rect, "LR", "grid4", "open") is not None
    du_closed = find_crossing(config, rect, "DU", "star8", "closed") is not None
    du_open = find_crossing(config, rect, "DU", "grid4", "open") is not None
    lr_closed = find_crossing(config, rect, "LR", "star8", "closed") is not None
    return (lr_open or du_closed) and (du_open or lr_closed)


def random_configuration(half_width: int, p: float, seed) -> GridConfiguration:
    """Independent open/closed states with open probability p."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError("p must lie in [0, 1]")
    rng = make_rng(seed)
    side = 2 * half_width + 1
    return GridConfiguration(half_width, rng.random((side, side)) < p, "independent-p")


# ---------------------------------------------------------------------------
# surrounding cycles (dual test) and boundary connectivity


def _open_labels(open_state: np.ndarray) -> tuple[np.ndarray, int]:
    return kernels.grid_label(np.ascontiguousarray(open_state), False)


def _labels_touching_rim(labels: np.ndarray) -> np.ndarray:
    rim = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    rim = rim[rim >= 0]
    return np.unique(rim)


def surrounded_check(config_l5: GridConfiguration, region_half_width: int) -> bool:
    """Is the central box [-r, r]^2 cut off from the sample-box boundary?

    True exactly when no complement-of-L5 cell of the central box connects to
    the boundary through complement cells (4-adjacency) — the dual criterion
    for a surrounding star-cycle of L_5 cells, restricted to the finite
    window.  Within the window this can overstate enclosure when the would-be
    cycle leaves the box; callers working near criticality should grow the
    box instead of the region.
    """
    n = config_l5.half_width
    r = region_half_width
    if not 0 <= r < n - 1:
        raise InvalidParameterError("need 0 <= region_half_width < half_width - 1")
    open_state = ~config_l5.state
    labels, _ = _open_labels(open_state)
    rim_labels = _labels_touching_rim(labels)
    center = labels[n - r: n + r + 1, n - r: n + r + 1]
    center_labels = np.unique(center[center >= 0])
    return not np.intersect1d(center_labels, rim_labels, assume_unique=True).size


def origin_to_boundary(config_t4: GridConfiguration) -> bool:
    """Does the origin's open 4-component touch the box boundary?"""
    n = config_t4.half_width
    if not config_t4.state[n, n]:
        return False
    labels, _ = _open_labels(config_t4.state)
    return int(labels[n, n]) in set(_labels_touching_rim(labels).tolist())


# ---------------------------------------------------------------------------
# theta estimation with shared-age coupling


@dataclass(frozen=True)
class ThetaEstimate:
    """Origin-to-boundary frequency per box size, pooled at the largest size."""

    sizes: tuple[int, ...]
    estimates: tuple[float, ...]
    pooled: float
    ci_half_width: float
    trials: int
    monotone: bool  # per-trial indicators never increased with size

    @property
    def ci(self) -> tuple[float, float]:
        return max(0.0, self.pooled - self.ci_half_width), min(
            1.0, self.pooled + self.ci_half_width
        )


def estimate_theta(sizes, trials: int, seed, z: float = 3.0) -> ThetaEstimate:
    """Estimate the origin's macroscopic-cluster probability on growing boxes.

    One age field per trial is sampled on the largest box and restricted to
    each smaller box, so the boundary-touching indicator is non-increasing in
    the size within every single trial (restriction only opens cells and the
    boundary only recedes).
    """
    sizes = sorted(int(s) for s in sizes)
    if not sizes or sizes[0] < 2:
        raise InvalidParameterError("sizes must be >= 2")
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    big = sizes[-1]
    rng = make_rng(seed)
    hits = np.zeros(len(sizes), dtype=np.int64)
    monotone = True
    side_big = 2 * big + 1
    for _ in range(trials):
        ages = rng.random((side_big, side_big))
        _grid_resample_ties(ages, rng)
        prev = True
        flags = []
        for s in sizes:
            lo, hi = big - s, big + s + 1
            layers = _grid_layer_counts(ages[lo:hi, lo:hi])
            cfg = GridConfiguration(s, layers <= 4, "layers-t4")
            flags.append(origin_to_boundary(cfg))
        for i, f in enumerate(flags):
            hits[i] += f
        if any(b and not a for a, b in zip(flags, flags[1:])):
            monotone = False
    est = hits / trials
    pooled = float(est[-1])
    half = z * math.sqrt(max(pooled * (1 - pooled), 1e-12) / trials)
    return ThetaEstimate(
        tuple(sizes), tuple(float(e) for e in est), pooled, half, trials, monotone
    )


# ---------------------------------------------------------------------------
# the finite-box experiment


def margin_bounds(half_width: int) -> int:
    """Interior margin: statistics are restricted to [-n+4*ceil(n^0.2), ...]^2."""
    return half_width - 4 * math.ceil(half_width ** 0.2)


@dataclass(frozen=True)
class T4BoxRow:
    trial: int
    half_width: int
    largest: int
    largest_fraction_raw: float
    largest_fraction_margin: float
    second_diameter: int
    origin_to_boundary: bool
    surrounded_r2: bool
    good_annuli: tuple[bool, ...]
    gc_passed: bool | None
    diameter_passed: bool | None


def _component_extents(labels: np.ndarray, count: int) -> np.ndarray:
    """Max coordinate extent (L-infinity diameter) per component label."""
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    xs, ys = np.nonzero(labels >= 0)
    lab = labels[xs, ys]
    big = np.iinfo(np.int64).max
    min_x = np.full(count, big)
    max_x = np.full(count, -big)
    min_y = np.full(count, big)
    max_y = np.full(count, -big)
    np.minimum.at(min_x, lab, xs)
    np.maximum.at(max_x, lab, xs)
    np.minimum.at(min_y, lab, ys)
    np.maximum.at(max_y, lab, ys)
    return np.maximum(max_x - min_x, max_y - min_y)


def t4_box_experiment(
    half_width: int,
    epsilon: float,
    trials: int,
    seed,
    theta_hat: float | None = None,
    diameter_coeff: float | None = None,
) -> list[T4BoxRow]:
    """Per-trial largest-component and small-component statistics of T_4 boxes.

    The giant-component verdict compares the largest component against
    4 * n^2 * (1 - epsilon) * theta_hat; the diameter verdict compares the
    largest extent among the other components against diameter_coeff * ln n.
    Raw whole-box fractions are reported next to margin-restricted ones (rim
    cells always land in T_4, so raw numbers overstate density on small
    boxes).
    """
    if half_width < 20:
        raise InvalidParameterError("t4_box_experiment needs half_width >= 20")
    if not 0 < epsilon <= 1:
        raise InvalidParameterError("epsilon must lie in (0, 1]")
    rows: list[T4BoxRow] = []
    n = half_width
    side = 2 * n + 1
    m = margin_bounds(n)
    margin_cells = (2 * m + 1) ** 2
    k_feasible = []
    k = 1
    while 2 ** (k + 1) <= n:
        k_feasible.append(k)
        k += 1
    gc_threshold = None
    if theta_hat is not None:
        gc_threshold = 4 * n * n * (1 - epsilon) * theta_hat
    diam_threshold = None
    if diameter_coeff is not None:
        diam_threshold = diameter_coeff * math.log(n)
    rng = make_rng(seed)
    for t in range(trials):
        ages = rng.random((side, side))
        _grid_resample_ties(ages, rng)
        layers = _grid_layer_counts(ages)
        t4 = GridConfiguration(n, layers <= 4, "layers-t4")
        l5 = GridConfiguration(n, layers == 5, "layers-l5")
        labels, count = _open_labels(t4.state)
        sizes = np.bincount(labels[labels >= 0], minlength=count)
        gc_label = int(np.argmax(sizes)) if count else -1
        largest = int(sizes[gc_label]) if count else 0
        in_margin = labels[n - m: n + m + 1, n - m: n + m + 1]
        margin_in_gc = int((in_margin == gc_label).sum()) if count else 0
        extents = _component_extents(labels, count)
        if count > 1:
            extents_wo_gc = np.delete(extents, gc_label)
            second_diameter = int(extents_wo_gc.max())
        else:
            second_diameter = 0
        rows.append(
            T4BoxRow(
                trial=t,
                half_width=n,
                largest=largest,
                largest_fraction_raw=largest / (side * side),
                largest_fraction_margin=margin_in_gc / margin_cells,
                second_diameter=second_diameter,
                origin_to_boundary=origin_to_boundary(t4),
                surrounded_r2=surrounded_check(l5, 2),
                good_annuli=tuple(annulus_circuit_check(t4, kk) for kk in k_feasible),
                gc_passed=None if gc_threshold is None else largest >= gc_threshold,
                diameter_passed=(
                    None if diam_threshold is None else second_diameter <= diam_threshold
                ),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# annulus circuits


def annulus_rectangles(k: int) -> tuple[CrossingRectangle, ...]:
    """The four rectangles forming the annulus between scales 2^k and 2^(k+1)."""
    lo, hi = 2 ** k, 2 ** (k + 1)
    return (
        CrossingRectangle(-hi, -hi, -lo, hi),  # left strip
        CrossingRectangle(-hi, -hi, hi, -lo),  # bottom strip
        CrossingRectangle(-hi, lo, hi, hi),    # top strip
        CrossingRectangle(lo, -hi, hi, hi),    # right strip
    )


def annulus_circuit_check(config_t4: GridConfiguration, k: int) -> bool:
    """All four annulus rectangles carry both their open 4-crossings, which
    certifies an open circuit around the box [-2^k, 2^k]^2."""
    if 2 ** (k + 1) > config_t4.half_width:
        raise SizeError("annulus exceeds the box")
    for rect in annulus_rectangles(k):
        if find_crossing(config_t4, rect, "LR", "grid4", "open") is None:
            return False
        if find_crossing(config_t4, rect, "DU", "grid4", "open") is None:
            return False
    return True


# ---------------------------------------------------------------------------
# text dumps


def dump_grid_text(t4: GridConfiguration, l5: GridConfiguration) -> str:
    """Rows from y = +n down to -n; characters: 0 closed, 1 in T_4, 2 in L_5."""
    if t4.half_width != l5.half_width:
        raise InvalidParameterError("configurations cover different boxes")
    digits = np.where(t4.state, 1, np.where(l5.state, 2, 0))
    lines = []
    for row in digits.T[::-1, :]:  # transpose: rows indexed by y, columns by x
        lines.append("".join(str(int(c)) for c in row))
    return "\n".join(lines) + "\n"
