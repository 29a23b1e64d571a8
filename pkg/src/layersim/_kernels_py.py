"""Reference kernels in Python/numpy.

These back the public modules whenever the compiled extension is unavailable
(or disabled via ``LAYERSIM_PURE=1``).  Semantics are the contract: the
compiled kernels in ``_kernels_c.pyx`` mirror these routines operation for
operation, including queue discipline and label order, so both backends
produce identical outputs.
"""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _scipy_cc

from .errors import TieError

BACKEND = "python"

# neighbor offsets, fixed order shared with the compiled kernels
OFFSETS4 = ((1, 0), (-1, 0), (0, 1), (0, -1))
OFFSETS8 = OFFSETS4 + ((1, 1), (1, -1), (-1, 1), (-1, -1))


def layers_from_ages(indptr: np.ndarray, indices: np.ndarray, ages: np.ndarray) -> np.ndarray:
    """Layer index per vertex: 1 + number of strictly younger neighbors.

    Parallel edges count with multiplicity; self-loops are ignored.  Raises
    :class:`TieError` on the first edge whose endpoints share an age.
    """
    n = len(indptr) - 1
    owner = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    nonloop = indices != owner
    o = owner[nonloop]
    u = indices[nonloop]
    tie = ages[o] == ages[u]
    if tie.any():
        i = int(np.argmax(tie))
        raise TieError(int(o[i]), int(u[i]))
    younger = ages[u] < ages[o]
    return (1 + np.bincount(o[younger], minlength=n)).astype(np.int64)


def _canonical(labels: np.ndarray, valid: np.ndarray) -> tuple[np.ndarray, int]:
    """Relabel component ids in first-occurrence (scan) order; -1 outside."""
    out = np.full(labels.shape, -1, dtype=np.int64)
    flat = labels[valid]
    if flat.size == 0:
        return out, 0
    nlab = int(flat.max()) + 1
    first = np.full(nlab, np.iinfo(np.int64).max)
    np.minimum.at(first, flat, np.arange(flat.size))
    present = np.flatnonzero(first < np.iinfo(np.int64).max)
    order = present[np.argsort(first[present], kind="stable")]
    new_of_old = np.empty(nlab, dtype=np.int64)
    new_of_old[order] = np.arange(order.size)
    out[valid] = new_of_old[flat]
    return out, int(order.size)


def masked_components(n: int, edges: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Component id per masked vertex (-1 outside), ids in first-vertex order."""
    mask = np.asarray(mask, dtype=bool)
    orig = np.flatnonzero(mask)
    if orig.size == 0:
        return np.full(n, -1, dtype=np.int64), 0
    remap = np.full(n, -1, dtype=np.int64)
    remap[orig] = np.arange(orig.size)
    if len(edges):
        keep = mask[edges[:, 0]] & mask[edges[:, 1]]
        e = remap[edges[keep]]
    else:
        e = np.empty((0, 2), dtype=np.int64)
    adj = coo_matrix(
        (np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(orig.size, orig.size)
    )
    _, sub_labels = _scipy_cc(adj, directed=False)
    labels = np.full(n, -1, dtype=np.int64)
    labels[orig] = sub_labels
    return _canonical(labels, mask)


def grid_label(mask: np.ndarray, star8: bool) -> tuple[np.ndarray, int]:
    """Label connected clusters of True cells; -1 outside, scan-order ids."""
    structure = np.ones((3, 3), dtype=bool) if star8 else ndimage.generate_binary_structure(2, 1)
    lab, _ = ndimage.label(mask, structure=structure)
    return _canonical(lab.astype(np.int64), np.asarray(mask, dtype=bool))


def crossing_parents(
    target: np.ndarray, axis: int, star8: bool
) -> tuple[int, np.ndarray]:
    """BFS from the low face to the high face of ``axis`` over True cells.

    Returns (flat index of the first high-face cell reached or -1, parents)
    where parents is flat with -1 marking BFS roots and -2 unreached.
    """
    w, h = target.shape
    parents = np.full(w * h, -2, dtype=np.int64)
    offsets = OFFSETS8 if star8 else OFFSETS4
    queue: deque[tuple[int, int]] = deque()
    if axis == 0:
        sources = [(0, y) for y in range(h) if target[0, y]]
    else:
        sources = [(x, 0) for x in range(w) if target[x, 0]]

    def at_sink(x: int, y: int) -> bool:
        return x == w - 1 if axis == 0 else y == h - 1

    for x, y in sources:
        parents[x * h + y] = -1
        if at_sink(x, y):
            return x * h + y, parents
        queue.append((x, y))
    while queue:
        x, y = queue.popleft()
        for dx, dy in offsets:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and parents[nx * h + ny] == -2 and target[nx, ny]:
                parents[nx * h + ny] = x * h + y
                if at_sink(nx, ny):
                    return nx * h + ny, parents
                queue.append((nx, ny))
    return -1, parents


def monotone_sizes(indptr: np.ndarray, indices: np.ndarray, ages: np.ndarray) -> np.ndarray:
    """|C_mon(v)| for every v: vertices reachable along strictly decreasing ages."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    idx = indices.tolist()
    ag = ages.tolist()
    out = np.zeros(n, dtype=np.int64)
    stamp = [-1] * n
    for v in range(n):
        stamp[v] = v
        stack = [v]
        cnt = 0
        while stack:
            u = stack.pop()
            cnt += 1
            au = ag[u]
            for j in range(ptr[u], ptr[u + 1]):
                wv = idx[j]
                if stamp[wv] != v and ag[wv] < au:
                    stamp[wv] = v
                    stack.append(wv)
        out[v] = cnt
    return out


def monotone_from(
    indptr: np.ndarray, indices: np.ndarray, ages: np.ndarray, v: int
) -> np.ndarray:
    """Membership mask of the monotone component of ``v``."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    idx = indices.tolist()
    ag = ages.tolist()
    member = np.zeros(n, dtype=bool)
    member[v] = True
    stack = [v]
    while stack:
        u = stack.pop()
        au = ag[u]
        for j in range(ptr[u], ptr[u + 1]):
            wv = idx[j]
            if not member[wv] and ag[wv] < au:
                member[wv] = True
                stack.append(wv)
    return member


def peel_min_degree(
    indptr: np.ndarray, indices: np.ndarray, k: int
) -> tuple[bool, np.ndarray, np.ndarray]:
    """Min-degree peeling with cutoff: remove vertices while min degree <= k-1.

    Self-loops are ignored; parallel edges count with multiplicity.  Returns
    (succeeded, removal order, stuck-core mask).  On success the order covers
    every vertex and each removed vertex had at most k-1 remaining neighbors.
    """
    n = len(indptr) - 1
    ptr = indptr.tolist()
    idx = indices.tolist()
    deg = [0] * n
    for v in range(n):
        for j in range(ptr[v], ptr[v + 1]):
            if idx[j] != v:
                deg[v] += 1
    maxdeg = max(deg, default=0)
    buckets: list[list[int]] = [[] for _ in range(maxdeg + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    removed = [False] * n
    order: list[int] = []
    cur = 0
    remaining = n
    while remaining:
        while cur <= maxdeg and not buckets[cur]:
            cur += 1
        if cur > maxdeg:
            break
        v = buckets[cur].pop()
        if removed[v] or deg[v] != cur:
            continue  # stale entry
        if cur >= k:
            break  # genuine minimum is >= k: stuck
        removed[v] = True
        order.append(v)
        remaining -= 1
        low = cur
        for j in range(ptr[v], ptr[v + 1]):
            u = idx[j]
            if u != v and not removed[u]:
                deg[u] -= 1  # parallel edges decrement once per copy
                buckets[deg[u]].append(u)
                if deg[u] < low:
                    low = deg[u]
        cur = low
    core = np.array([not r for r in removed], dtype=bool)
    if remaining == 0:
        return True, np.array(order, dtype=np.int64), core
    return False, np.array(order, dtype=np.int64), core


# ---------------------------------------------------------------------------
# exact treewidth on bitmask graphs (n <= 12) and the small-graph sweep


def _reach_q(adj: list[int], s0: int, v: int) -> int:
    """Vertices outside s0+{v} joined to v through s0 (elimination back-degree)."""
    comp = 1 << v
    frontier = comp
    while frontier:
        nb = 0
        f = frontier
        while f:
            w = (f & -f).bit_length() - 1
            nb |= adj[w]
            f &= f - 1
        grown = comp | (nb & s0)
        frontier = grown & ~comp
        comp = grown
    nb_all = 0
    c = comp
    while c:
        w = (c & -c).bit_length() - 1
        nb_all |= adj[w]
        c &= c - 1
    return (nb_all & ~s0 & ~(1 << v)).bit_count()


def treewidth_exact(adj: list[int], n: int) -> int:
    """Exact treewidth via dynamic programming over elimination prefixes."""
    if n == 0:
        return -1
    adj = [int(a) for a in adj]  # plain ints: bit tricks below need .bit_length
    full = (1 << n) - 1
    f = [0] * (full + 1)
    for s in range(1, full + 1):
        best = 127
        rest = s
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            s0 = s & ~(1 << v)
            q = _reach_q(adj, s0, v)
            cand = f[s0] if f[s0] > q else q
            if cand < best:
                best = cand
        f[s] = best
    return f[full]


def balanced_separator_exists(adj: list[int], n: int, max_size: int) -> bool:
    """Is there S, |S| <= max_size, with all components of G-S of size <= 2n/3?"""
    adj = [int(a) for a in adj]
    full = (1 << n) - 1
    bound = (2 * n) // 3
    for s in range(full + 1):
        if s.bit_count() > max_size:
            continue
        rest = full & ~s
        ok = True
        r = rest
        while r:
            v = (r & -r).bit_length() - 1
            comp = 1 << v
            frontier = comp
            while frontier:
                nb = 0
                fbits = frontier
                while fbits:
                    w = (fbits & -fbits).bit_length() - 1
                    nb |= adj[w]
                    fbits &= fbits - 1
                grown = comp | (nb & rest)
                frontier = grown & ~comp
                comp = grown
            if comp.bit_count() > bound:
                ok = False
                break
            r &= ~comp
        if ok:
            return True
    return False


def separator_sweep(n: int, chunk: int = 1 << 16) -> tuple[int, int, int]:
    """Exhaustive check over all labeled graphs on exactly n vertices (n <= 7).

    For every connected graph, computes the exact treewidth and verifies a
    balanced separator of size at most tw+1 exists.  Vectorized across graphs
    on the chunk axis.  Returns (graphs, connected, violations).
    """
    if n < 1 or n > 7:
        raise ValueError("sweep supports 1 <= n <= 7")
    bits = [(i, j) for i in range(n) for j in range(i + 1, n)]
    nedges = len(bits)
    full = (1 << n) - 1
    bound = (2 * n) // 3
    total = 1 << nedges
    connected = 0
    violations = 0

    def smear(adj_cols: np.ndarray, seed_sets: np.ndarray, within: int | np.ndarray) -> np.ndarray:
        comp = seed_sets
        for _ in range(n):
            nb = np.zeros_like(comp)
            for w in range(n):
                on = (comp >> w) & 1
                nb |= adj_cols[w] * on
            grown = comp | (nb & within)
            if np.array_equal(grown, comp):
                break
            comp = grown
        return comp

    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        adj = np.zeros((n, len(ids)), dtype=np.int64)
        for b, (i, j) in enumerate(bits):
            has = (ids >> b) & 1
            adj[i] |= has << j
            adj[j] |= has << i
        comp0 = smear(adj, np.ones(len(ids), dtype=np.int64), full)
        conn = comp0 == full
        connected += int(conn.sum())
        adj = adj[:, conn]
        g = adj.shape[1]
        if g == 0:
            continue
        # treewidth DP, group axis vectorized
        f = np.zeros((full + 1, g), dtype=np.int8)
        for s in range(1, full + 1):
            best = np.full(g, 127, dtype=np.int8)
            rest = s
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                s0 = s & ~(1 << v)
                comp = smear(adj, np.full(g, 1 << v, dtype=np.int64), s0 | (1 << v))
                nb_all = np.zeros(g, dtype=np.int64)
                for w in range(n):
                    nb_all |= adj[w] * ((comp >> w) & 1)
                q = np.bitwise_count(nb_all & ~np.int64(s0) & ~np.int64(1 << v)).astype(np.int8)
                cand = np.maximum(f[s0], q)
                best = np.minimum(best, cand)
            f[s] = best
        tw = f[full].astype(np.int64)
        # smallest balanced separator per graph
        min_sep = np.full(g, n + 1, dtype=np.int64)
        for s in range(full + 1):
            size = s.bit_count()
            rest = full & ~s
            balanced = np.ones(g, dtype=bool)
            r = rest
            while r:
                v = (r & -r).bit_length() - 1
                r &= r - 1
                comp = smear(adj, np.full(g, 1 << v, dtype=np.int64), rest)
                balanced &= np.bitwise_count(comp) <= bound
            min_sep = np.where(balanced, np.minimum(min_sep, size), min_sep)
        violations += int((min_sep > tw + 1).sum())
    return total, connected, violations
