# Compiled hot kernels. Each routine mirrors its reference twin in
# _kernels_py.py exactly (queue discipline, label order, tie scan order), so
# the two backends are interchangeable output-for-output.

import numpy as np

cimport numpy as cnp

from .errors import TieError

cnp.import_array()

BACKEND = "compiled"

cdef extern from *:
    int __builtin_ctz(unsigned int) nogil
    int __builtin_popcount(unsigned int) nogil

# neighbor offsets, fixed order shared with the Python kernels
cdef int OFFX[8]
cdef int OFFY[8]
OFFX[0] = 1; OFFY[0] = 0
OFFX[1] = -1; OFFY[1] = 0
OFFX[2] = 0; OFFY[2] = 1
OFFX[3] = 0; OFFY[3] = -1
OFFX[4] = 1; OFFY[4] = 1
OFFX[5] = 1; OFFY[5] = -1
OFFX[6] = -1; OFFY[6] = 1
OFFX[7] = -1; OFFY[7] = -1


def layers_from_ages(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, const double[::1] ages):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t v, j
    cdef cnp.int64_t u
    cdef cnp.int64_t cnt
    cdef double av
    cdef Py_ssize_t tie_u = -1, tie_v = -1
    for v in range(n):
        cnt = 0
        av = ages[v]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if u == v:
                continue
            if ages[u] < av:
                cnt += 1
            elif ages[u] == av:
                tie_u = v
                tie_v = u
                break
        if tie_u >= 0:
            break
        out[v] = cnt + 1
    if tie_u >= 0:
        raise TieError(int(tie_u), int(tie_v))
    return out_arr


cdef cnp.int64_t _find(cnp.int64_t[::1] parent, cnp.int64_t x) nogil:
    cdef cnp.int64_t root = x, t
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        t = parent[x]
        parent[x] = root
        x = t
    return root


def masked_components(Py_ssize_t n, const cnp.int64_t[:, ::1] edges, const cnp.npy_bool[::1] mask):
    parent_arr = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = parent_arr
    size_arr = np.ones(n, dtype=np.int64)
    cdef cnp.int64_t[::1] size = size_arr
    cdef Py_ssize_t e, m = edges.shape[0]
    cdef cnp.int64_t u, v, ru, rv
    for e in range(m):
        u = edges[e, 0]
        v = edges[e, 1]
        if mask[u] and mask[v]:
            ru = _find(parent, u)
            rv = _find(parent, v)
            if ru != rv:
                if size[ru] < size[rv]:
                    ru, rv = rv, ru
                parent[rv] = ru
                size[ru] += size[rv]
    labels_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] labels = labels_arr
    root_label_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] root_label = root_label_arr
    cdef cnp.int64_t nxt = 0, r
    cdef Py_ssize_t w
    for w in range(n):
        if mask[w]:
            r = _find(parent, w)
            if root_label[r] < 0:
                root_label[r] = nxt
                nxt += 1
            labels[w] = root_label[r]
    return labels_arr, int(nxt)


def grid_label(const cnp.npy_bool[:, ::1] mask, bint star8):
    cdef Py_ssize_t w = mask.shape[0], h = mask.shape[1]
    labels_arr = np.full((w, h), -1, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] labels = labels_arr
    queue_arr = np.empty(w * h, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef Py_ssize_t x, y, qhead, qtail
    cdef cnp.int64_t cur, lab = 0
    cdef int noff = 8 if star8 else 4, o
    cdef Py_ssize_t cx, cy, nx, ny
    for x in range(w):
        for y in range(h):
            if mask[x, y] and labels[x, y] < 0:
                labels[x, y] = lab
                queue[0] = x * h + y
                qhead = 0
                qtail = 1
                while qhead < qtail:
                    cur = queue[qhead]
                    qhead += 1
                    cx = cur // h
                    cy = cur % h
                    for o in range(noff):
                        nx = cx + OFFX[o]
                        ny = cy + OFFY[o]
                        if 0 <= nx < w and 0 <= ny < h and mask[nx, ny] and labels[nx, ny] < 0:
                            labels[nx, ny] = lab
                            queue[qtail] = nx * h + ny
                            qtail += 1
                lab += 1
    return labels_arr, int(lab)


def crossing_parents(const cnp.npy_bool[:, ::1] target, int axis, bint star8):
    cdef Py_ssize_t w = target.shape[0], h = target.shape[1]
    parents_arr = np.full(w * h, -2, dtype=np.int64)
    cdef cnp.int64_t[::1] parents = parents_arr
    queue_arr = np.empty(w * h, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef Py_ssize_t qhead = 0, qtail = 0
    cdef Py_ssize_t x, y, nx, ny
    cdef cnp.int64_t cur
    cdef int noff = 8 if star8 else 4, o
    if axis == 0:
        for y in range(h):
            if target[0, y]:
                parents[y] = -1
                if w == 1:
                    return int(y), parents_arr
                queue[qtail] = y
                qtail += 1
    else:
        for x in range(w):
            if target[x, 0]:
                parents[x * h] = -1
                if h == 1:
                    return int(x * h), parents_arr
                queue[qtail] = x * h
                qtail += 1
    while qhead < qtail:
        cur = queue[qhead]
        qhead += 1
        x = cur // h
        y = cur % h
        for o in range(noff):
            nx = x + OFFX[o]
            ny = y + OFFY[o]
            if 0 <= nx < w and 0 <= ny < h and parents[nx * h + ny] == -2 and target[nx, ny]:
                parents[nx * h + ny] = cur
                if (axis == 0 and nx == w - 1) or (axis == 1 and ny == h - 1):
                    return int(nx * h + ny), parents_arr
                queue[qtail] = nx * h + ny
                qtail += 1
    return -1, parents_arr


def monotone_sizes(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, const double[::1] ages):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    stamp_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] stamp = stamp_arr
    stack_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] stack = stack_arr
    cdef Py_ssize_t v, top, j
    cdef cnp.int64_t u, wv, cnt
    cdef double au
    for v in range(n):
        stamp[v] = v
        stack[0] = v
        top = 1
        cnt = 0
        while top > 0:
            top -= 1
            u = stack[top]
            cnt += 1
            au = ages[u]
            for j in range(indptr[u], indptr[u + 1]):
                wv = indices[j]
                if stamp[wv] != v and ages[wv] < au:
                    stamp[wv] = v
                    stack[top] = wv
                    top += 1
        out[v] = cnt
    return out_arr


def monotone_from(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, const double[::1] ages,
                  Py_ssize_t v):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    member_arr = np.zeros(n, dtype=bool)
    cdef cnp.npy_bool[::1] member = member_arr
    stack_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 1, j
    cdef cnp.int64_t u, wv
    cdef double au
    member[v] = True
    stack[0] = v
    while top > 0:
        top -= 1
        u = stack[top]
        au = ages[u]
        for j in range(indptr[u], indptr[u + 1]):
            wv = indices[j]
            if not member[wv] and ages[wv] < au:
                member[wv] = True
                stack[top] = wv
                top += 1
    return member_arr


def peel_min_degree(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, cnp.int64_t k):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m2 = indices.shape[0]
    deg_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] deg = deg_arr
    cdef Py_ssize_t v, j
    cdef cnp.int64_t maxdeg = 0
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            if indices[j] != v:
                deg[v] += 1
        if deg[v] > maxdeg:
            maxdeg = deg[v]
    # lazy bucket queue as a linked-list pool; push-front/pop-front = LIFO,
    # matching the list.append/list.pop of the reference kernel
    cdef Py_ssize_t pool_cap = n + m2 + 1
    entry_v_arr = np.empty(pool_cap, dtype=np.int64)
    entry_next_arr = np.empty(pool_cap, dtype=np.int64)
    head_arr = np.full(maxdeg + 1, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] entry_v = entry_v_arr
    cdef cnp.int64_t[::1] entry_next = entry_next_arr
    cdef cnp.int64_t[::1] head = head_arr
    cdef Py_ssize_t pool = 0
    for v in range(n):
        entry_v[pool] = v
        entry_next[pool] = head[deg[v]]
        head[deg[v]] = pool
        pool += 1
    removed_arr = np.zeros(n, dtype=bool)
    cdef cnp.npy_bool[::1] removed = removed_arr
    order_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] order = order_arr
    cdef Py_ssize_t norder = 0
    cdef cnp.int64_t cur = 0, remaining = n, low, e
    cdef cnp.int64_t u
    while remaining > 0:
        while cur <= maxdeg and head[cur] < 0:
            cur += 1
        if cur > maxdeg:
            break
        e = head[cur]
        head[cur] = entry_next[e]
        v = entry_v[e]
        if removed[v] or deg[v] != cur:
            continue
        if cur >= k:
            break
        removed[v] = True
        order[norder] = v
        norder += 1
        remaining -= 1
        low = cur
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if u != v and not removed[u]:
                deg[u] -= 1
                entry_v[pool] = u
                entry_next[pool] = head[deg[u]]
                head[deg[u]] = pool
                pool += 1
                if deg[u] < low:
                    low = deg[u]
        cur = low
    core_arr = ~removed_arr
    if remaining == 0:
        return True, order_arr[:norder].copy(), core_arr
    return False, order_arr[:norder].copy(), core_arr


# ---------------------------------------------------------------------------
# exact treewidth on bitmask graphs (n <= 12) and the small-graph sweep

cdef int _reach_q_c(int* adj, int s0, int v) nogil:
    cdef int comp = 1 << v
    cdef int frontier = comp
    cdef int nb, f, w, grown, c
    while frontier:
        nb = 0
        f = frontier
        while f:
            w = __builtin_ctz(<unsigned int> f)
            nb |= adj[w]
            f &= f - 1
        grown = comp | (nb & s0)
        frontier = grown & ~comp
        comp = grown
    nb = 0
    c = comp
    while c:
        w = __builtin_ctz(<unsigned int> c)
        nb |= adj[w]
        c &= c - 1
    return __builtin_popcount(<unsigned int> (nb & ~s0 & ~(1 << v)))


cdef int _treewidth_bits(int* adj, int n, signed char* f) nogil:
    cdef int full = (1 << n) - 1
    cdef int s, rest, v, s0, q, cand, best
    f[0] = 0
    for s in range(1, full + 1):
        best = 127
        rest = s
        while rest:
            v = __builtin_ctz(<unsigned int> rest)
            rest &= rest - 1
            s0 = s & ~(1 << v)
            q = _reach_q_c(adj, s0, v)
            cand = f[s0]
            if q > cand:
                cand = q
            if cand < best:
                best = cand
        f[s] = <signed char> best
    return f[full]


def treewidth_exact(adj_py, int n):
    if n == 0:
        return -1
    if n > 12:
        raise ValueError("treewidth_exact supports n <= 12")
    cdef int adj[12]
    cdef int i
    for i in range(n):
        adj[i] = adj_py[i]
    cdef signed char f[4096]
    return int(_treewidth_bits(adj, n, f))


cdef bint _component_sizes_ok(int* adj, int n, int rest, int bound) nogil:
    cdef int r = rest, v, comp, frontier, nb, f, w, grown
    while r:
        v = __builtin_ctz(<unsigned int> r)
        comp = 1 << v
        frontier = comp
        while frontier:
            nb = 0
            f = frontier
            while f:
                w = __builtin_ctz(<unsigned int> f)
                nb |= adj[w]
                f &= f - 1
            grown = comp | (nb & rest)
            frontier = grown & ~comp
            comp = grown
        if __builtin_popcount(<unsigned int> comp) > bound:
            return False
        r &= ~comp
    return True


def balanced_separator_exists(adj_py, int n, int max_size):
    cdef int adj[12]
    cdef int i
    for i in range(n):
        adj[i] = adj_py[i]
    cdef int full = (1 << n) - 1
    cdef int bound = (2 * n) // 3
    cdef int s
    for s in range(full + 1):
        if __builtin_popcount(<unsigned int> s) > max_size:
            continue
        if _component_sizes_ok(adj, n, full & ~s, bound):
            return True
    return False


def separator_sweep(int n, chunk=None):
    """Exhaustive treewidth-vs-separator check over all labeled graphs on n <= 7
    vertices; returns (graphs, connected, violations)."""
    if n < 1 or n > 7:
        raise ValueError("sweep supports 1 <= n <= 7")
    cdef int nedges = n * (n - 1) // 2
    cdef int bi[21]
    cdef int bj[21]
    cdef int b = 0, i, j
    for i in range(n):
        for j in range(i + 1, n):
            bi[b] = i
            bj[b] = j
            b += 1
    cdef long total = 1 << nedges
    cdef long connected = 0, violations = 0, gid
    cdef int adj[7]
    cdef signed char f[128]
    cdef int full = (1 << n) - 1
    cdef int bound = (2 * n) // 3
    cdef int comp, frontier, nb, fb, w, grown, tw, s, found
    with nogil:
        for gid in range(total):
            for i in range(n):
                adj[i] = 0
            for b in range(nedges):
                if (gid >> b) & 1:
                    adj[bi[b]] |= 1 << bj[b]
                    adj[bj[b]] |= 1 << bi[b]
            # connectivity from vertex 0
            comp = 1
            frontier = 1
            while frontier:
                nb = 0
                fb = frontier
                while fb:
                    w = __builtin_ctz(<unsigned int> fb)
                    nb |= adj[w]
                    fb &= fb - 1
                grown = comp | nb
                frontier = grown & ~comp
                comp = grown
            if comp != full:
                continue
            connected += 1
            tw = _treewidth_bits(adj, n, f)
            found = 0
            for s in range(full + 1):
                if __builtin_popcount(<unsigned int> s) > tw + 1:
                    continue
                if _component_sizes_ok(adj, n, full & ~s, bound):
                    found = 1
                    break
            if not found:
                violations += 1
    return int(total), int(connected), int(violations)
