"""Graph families and the shared immutable adjacency representation.

Vertices are dense integer indices ``0..n-1``.  Generators document their
labeling: cyclic order for cycles, level order for trees, row-major order for
grid boxes.  A :class:`Graph` is immutable after construction and safe to
share across concurrent readers; generators are pure functions of
(parameters, seed).

Multigraph convention: ``edges`` lists every undirected edge once, parallel
edges repeat the pair, and a self-loop ``(v, v)`` contributes 2 to ``v``'s
degree (it appears twice in ``v``'s adjacency slice).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import InvalidParameterError, UnsupportedInputError
from .rng import make_rng

__all__ = [
    "Graph",
    "DegreeSequence",
    "cycle",
    "path",
    "complete",
    "cycle_plus_matching",
    "configuration_model",
    "complete_binary_tree",
    "grid_box",
    "grid_index",
    "star_collection",
    "subdivide_edges",
    "d_ary_tree",
    "induced_subgraph",
    "save_graph",
    "load_graph",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Graph:
    """Immutable undirected (multi)graph on vertices ``0..n-1``.

    Attributes
    ----------
    n : int
        Number of vertices.
    edges : ndarray of shape (m, 2)
        Each undirected edge once; loops as ``(v, v)``.
    is_multigraph : bool
        False guarantees no loops and no parallel edges.
    coords : ndarray of shape (n, 2) or None
        Integer lattice coordinates, present only for grid graphs.
    """

    n: int
    edges: np.ndarray
    is_multigraph: bool = False
    coords: np.ndarray | None = None

    def __post_init__(self):
        edges = np.ascontiguousarray(np.asarray(self.edges, dtype=np.int64).reshape(-1, 2))
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise InvalidParameterError("edge endpoint out of range")
        object.__setattr__(self, "edges", _frozen(edges))
        if self.coords is not None:
            object.__setattr__(
                self, "coords", _frozen(np.ascontiguousarray(self.coords, dtype=np.int64))
            )
        if not self.is_multigraph:
            if edges.size and np.any(edges[:, 0] == edges[:, 1]):
                raise InvalidParameterError("simple graph cannot contain self-loops")
            if len(np.unique(np.sort(edges, axis=1), axis=0)) != len(edges):
                raise InvalidParameterError("simple graph cannot contain parallel edges")

    @classmethod
    def from_edges(cls, n: int, edges, coords=None) -> "Graph":
        """Build a graph, detecting the multigraph flag from the edge list."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        multi = False
        if edges.size:
            multi = bool(np.any(edges[:, 0] == edges[:, 1]))
            if not multi:
                multi = len(np.unique(np.sort(edges, axis=1), axis=0)) != len(edges)
        return cls(n, edges, is_multigraph=multi, coords=coords)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degree per vertex; a loop counts 2."""
        deg = np.bincount(self.edges.ravel(), minlength=self.n)
        return _frozen(deg.astype(np.int64))

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        owner = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        nbr = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        order = np.lexsort((nbr, owner))  # sorts each adjacency slice
        indices = np.ascontiguousarray(nbr[order])
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        return _frozen(indptr), _frozen(indices)

    @property
    def indptr(self) -> np.ndarray:
        return self._csr[0]

    @property
    def indices(self) -> np.ndarray:
        return self._csr[1]

    def neighbors(self, v: int) -> np.ndarray:
        indptr, indices = self._csr
        return indices[indptr[v]: indptr[v + 1]]

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.is_multigraph == other.is_multigraph
            and np.array_equal(self.edges, other.edges)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.is_multigraph))

    def validate(self) -> None:
        """Re-check the structural invariants (symmetry, degree sum, simplicity)."""
        if int(self.degrees.sum()) != 2 * self.m:
            raise AssertionError("degree sum must equal twice the edge count")
        indptr, indices = self._csr
        if len(indices) != 2 * self.m:
            raise AssertionError("adjacency length mismatch")
        # symmetry with multiplicity: the (owner, neighbor) multiset is its own transpose
        owner = np.repeat(np.arange(self.n), np.diff(indptr))
        fwd = np.lexsort((indices, owner))
        rev = np.lexsort((owner, indices))
        if not (
            np.array_equal(owner[fwd], indices[rev]) and np.array_equal(indices[fwd], owner[rev])
        ):
            raise AssertionError("adjacency not symmetric with multiplicity")


# ---------------------------------------------------------------------------
# degree sequences


@dataclass(frozen=True)
class DegreeSequence:
    """Degree multiplicities: ``entries`` is a tuple of (degree, count)."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ent = tuple((int(d), int(c)) for d, c in self.entries)
        for d, c in ent:
            if d < 0:
                raise InvalidParameterError("degrees must be non-negative")
            if c <= 0:
                raise InvalidParameterError("counts must be positive")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def regular(cls, degree: int, count: int) -> "DegreeSequence":
        return cls(((degree, count),))

    @property
    def vertex_count(self) -> int:
        return sum(c for _, c in self.entries)

    @property
    def degree_sum(self) -> int:
        return sum(d * c for d, c in self.entries)

    def expand(self) -> np.ndarray:
        """Per-vertex degrees, blocks in entry order."""
        return np.repeat(
            np.array([d for d, _ in self.entries], dtype=np.int64),
            np.array([c for _, c in self.entries], dtype=np.int64),
        )

    def fractions(self) -> dict[int, Fraction]:
        """Degree -> fraction of vertices, as exact rationals summing to 1."""
        n = self.vertex_count
        out: dict[int, Fraction] = {}
        for d, c in self.entries:
            out[d] = out.get(d, Fraction(0)) + Fraction(c, n)
        return out


# ---------------------------------------------------------------------------
# generators


def cycle(n: int) -> Graph:
    """The n-cycle, vertices in cyclic order (edge i -- i+1 mod n)."""
    if n < 3:
        raise InvalidParameterError("cycle needs n >= 3")
    i = np.arange(n, dtype=np.int64)
    return Graph(n, np.column_stack([i, (i + 1) % n]))


def path(n: int) -> Graph:
    """Path on n vertices in index order."""
    if n < 1:
        raise InvalidParameterError("path needs n >= 1")
    i = np.arange(n - 1, dtype=np.int64)
    return Graph(n, np.column_stack([i, i + 1]))


def complete(n: int) -> Graph:
    u, v = np.triu_indices(n, k=1)
    return Graph(n, np.column_stack([u, v]).astype(np.int64))


def cycle_plus_matching(n: int, seed) -> Graph:
    """n-cycle plus a uniformly random perfect matching on all n vertices.

    3-regular for every seed.  The matching is sampled by one Fisher-Yates
    shuffle of the vertex set, pairing consecutive entries; when a matching
    edge duplicates a cycle edge the result is flagged as a multigraph.
    """
    if n < 4 or n % 2 != 0:
        raise InvalidParameterError("cycle_plus_matching needs even n >= 4")
    rng = make_rng(seed)
    i = np.arange(n, dtype=np.int64)
    cyc = np.column_stack([i, (i + 1) % n])
    perm = rng.permutation(n).astype(np.int64)
    matching = perm.reshape(-1, 2)
    return Graph.from_edges(n, np.vstack([cyc, matching]))


def configuration_model(d: DegreeSequence, seed) -> Graph:
    """Multigraph from a uniformly random pairing of degree-mandated half-edges.

    Loops and parallel edges are kept (no rejection).  Vertex labels follow
    the entry blocks of ``d``.
    """
    if d.degree_sum % 2 != 0:
        raise InvalidParameterError("degree sum must be even")
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(d.vertex_count, dtype=np.int64), d.expand())
    rng.shuffle(stubs)
    return Graph.from_edges(d.vertex_count, stubs.reshape(-1, 2))


def random_simple_regular(d: int, n: int, seed) -> Graph:
    """Simple d-regular graph: half-edge pairings resampled until loop- and
    parallel-free, which conditions the pairing model on simplicity."""
    if d * n % 2 != 0:
        raise InvalidParameterError("d * n must be even")
    rng = make_rng(seed)
    seq = DegreeSequence.regular(d, n)
    while True:
        g = configuration_model(seq, rng)
        if not g.is_multigraph:
            return g


def complete_binary_tree(n: int) -> Graph:
    """Complete binary tree with n-1 vertices, n a power of two >= 2.

    Level order (heap indexing): vertex j has children 2j+1 and 2j+2; level i
    holds 2**i vertices.
    """
    if n < 2 or n & (n - 1):
        raise InvalidParameterError("complete_binary_tree needs a power of two >= 2")
    size = n - 1
    j = np.arange(1, size, dtype=np.int64)
    return Graph(size, np.column_stack([(j - 1) // 2, j]))


def grid_box(half_width: int) -> Graph:
    """Induced 4-neighbor grid on the box [-n, n]^2, row-major labeling.

    Vertex index of coordinate (x, y) is ``(x+n)*(2n+1) + (y+n)``; the reverse
    map is carried in ``coords``.
    """
    if half_width < 1:
        raise InvalidParameterError("grid_box needs half_width >= 1")
    side = 2 * half_width + 1
    ix, iy = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    coords = np.column_stack([ix.ravel() - half_width, iy.ravel() - half_width])
    idx = np.arange(side * side, dtype=np.int64).reshape(side, side)
    horiz = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    vert = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    return Graph(side * side, np.vstack([horiz, vert]), coords=coords)


def grid_index(g: Graph, x: int, y: int) -> int:
    """Index of coordinate (x, y) in a grid_box graph."""
    if g.coords is None:
        raise InvalidParameterError("graph carries no grid coordinates")
    side = int(round(np.sqrt(g.n)))
    half = (side - 1) // 2
    if not (-half <= x <= half and -half <= y <= half):
        raise InvalidParameterError(f"coordinate ({x}, {y}) outside box")
    return (x + half) * side + (y + half)


def star_collection(star_count: int, star_size: int) -> Graph:
    """Disjoint stars: each star is a center joined to ``star_size`` leaves.

    Star s occupies the index block ``s*(star_size+1) ..``, center first.
    """
    if star_count < 1 or star_size < 1:
        raise InvalidParameterError("star_collection needs positive parameters")
    block = star_size + 1
    centers = np.repeat(np.arange(star_count, dtype=np.int64) * block, star_size)
    leaves = np.concatenate(
        [s * block + 1 + np.arange(star_size, dtype=np.int64) for s in range(star_count)]
    )
    return Graph(star_count * block, np.column_stack([centers, leaves]))


def subdivide_edges(g: Graph) -> tuple[Graph, np.ndarray]:
    """Replace every edge (u, v) by the path u - x - y - v with two new vertices.

    Original vertices keep their indices and degrees; edge e gains vertices
    ``n + 2e`` and ``n + 2e + 1``.  Returns (graph, origin) where
    ``origin[w]`` is the index of the edge that spawned vertex w, or -1 for
    original vertices.
    """
    if g.is_multigraph:
        raise UnsupportedInputError("subdivision requires a simple graph")
    n, m = g.n, g.m
    e = np.arange(m, dtype=np.int64)
    x = n + 2 * e
    y = x + 1
    new_edges = np.vstack(
        [
            np.column_stack([g.edges[:, 0], x]),
            np.column_stack([x, y]),
            np.column_stack([y, g.edges[:, 1]]),
        ]
    )
    origin = np.full(n + 2 * m, -1, dtype=np.int64)
    origin[x] = e
    origin[y] = e
    return Graph(n + 2 * m, new_edges), origin


def d_ary_tree(d: int, depth: int) -> Graph:
    """Rooted tree where every non-leaf has exactly d children, cut at ``depth``.

    Root is vertex 0; levels are labeled consecutively.
    """
    if d < 1:
        raise InvalidParameterError("d_ary_tree needs d >= 1")
    if depth < 0:
        raise InvalidParameterError("d_ary_tree needs depth >= 0")
    level_sizes = [d**i for i in range(depth + 1)]
    total = sum(level_sizes)
    edges = []
    base = 1  # index of first vertex of the current level
    parent_base = 0
    for lvl in range(1, depth + 1):
        count = level_sizes[lvl]
        child = base + np.arange(count, dtype=np.int64)
        parent = parent_base + (child - base) // d
        edges.append(np.column_stack([parent, child]))
        parent_base = base
        base += count
    all_edges = np.vstack(edges) if edges else np.empty((0, 2), dtype=np.int64)
    return Graph(total, all_edges)


# ---------------------------------------------------------------------------
# induced subgraphs and serialization


def induced_subgraph(g: Graph, mask: np.ndarray) -> tuple[Graph, np.ndarray]:
    """Vertex-induced subgraph on ``mask``; returns (subgraph, original_indices)."""
    mask = np.asarray(mask, dtype=bool)
    orig = np.flatnonzero(mask)
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[orig] = np.arange(len(orig))
    if g.m:
        keep = mask[g.edges[:, 0]] & mask[g.edges[:, 1]]
        sub_edges = remap[g.edges[keep]]
    else:
        sub_edges = np.empty((0, 2), dtype=np.int64)
    sub = Graph(len(orig), sub_edges, is_multigraph=g.is_multigraph)
    return sub, orig


def save_graph(g: Graph, f) -> None:
    """Plain-text edge list: first line ``n m [multi]``, then m lines ``u v``."""
    own = isinstance(f, str)
    fh = open(f, "w") if own else f
    try:
        head = f"{g.n} {g.m}"
        if g.is_multigraph:
            head += " multi"
        fh.write(head + "\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")
    finally:
        if own:
            fh.close()


def load_graph(f) -> Graph:
    """Inverse of :func:`save_graph`."""
    own = isinstance(f, str)
    fh = open(f) if own else f
    try:
        header = fh.readline().split()
        if len(header) not in (2, 3):
            raise InvalidParameterError("bad edge-list header")
        try:
            n, m = int(header[0]), int(header[1])
        except ValueError:
            raise InvalidParameterError("bad edge-list header") from None
        multi = len(header) == 3 and header[2] == "multi"
        edges = np.empty((m, 2), dtype=np.int64)
        for i in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise InvalidParameterError(f"bad edge line {i + 2}")
            try:
                edges[i] = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise InvalidParameterError(f"bad edge line {i + 2}") from None
        return Graph(n, edges, is_multigraph=multi)
    finally:
        if own:
            fh.close()
