"""Backend parity: the compiled kernels must reproduce the Python reference
bit for bit (labels, orders, parents, and all)."""

import numpy as np
import pytest

from layersim import _kernels_py as pyk
from layersim.kernels import backend_name

ck = pytest.importorskip("layersim._kernels_c")


def _random_csr(rng, n, m, loops=True):
    e = rng.integers(0, n, size=(m, 2))
    if not loops:
        e = e[e[:, 0] != e[:, 1]]
    owner = np.concatenate([e[:, 0], e[:, 1]])
    nbr = np.concatenate([e[:, 1], e[:, 0]])
    order = np.lexsort((nbr, owner))
    indices = np.ascontiguousarray(nbr[order]).astype(np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=n), out=indptr[1:])
    return np.ascontiguousarray(e.astype(np.int64)), indptr, indices


@pytest.fixture(scope="module")
def cases():
    rng = np.random.default_rng(0)
    out = []
    for n, m in [(1, 0), (8, 10), (60, 90), (300, 800)]:
        e, indptr, indices = _random_csr(rng, n, m)
        ages = rng.random(n)
        out.append((n, e, indptr, indices, ages, rng.random(n) < 0.7))
    return out


def test_layers_parity(cases):
    for n, e, indptr, indices, ages, mask in cases:
        a = pyk.layers_from_ages(indptr, indices, ages)
        b = ck.layers_from_ages(indptr, indices, ages)
        assert np.array_equal(a, b)


def test_layers_tie_parity():
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int64)
    ages = np.array([0.25, 0.25])
    for impl in (pyk, ck):
        with pytest.raises(Exception):
            impl.layers_from_ages(indptr, indices, ages)


def test_components_parity(cases):
    for n, e, indptr, indices, ages, mask in cases:
        a, ca = pyk.masked_components(n, e, mask)
        b, cb = ck.masked_components(n, e, mask)
        assert ca == cb and np.array_equal(a, b)


def test_grid_label_parity():
    rng = np.random.default_rng(1)
    for shape in [(1, 1), (5, 9), (30, 30), (64, 17)]:
        mask = rng.random(shape) < 0.55
        for star8 in (False, True):
            a, ca = pyk.grid_label(mask, star8)
            b, cb = ck.grid_label(np.ascontiguousarray(mask), star8)
            assert ca == cb and np.array_equal(a, b)


def test_crossing_parity():
    rng = np.random.default_rng(2)
    for shape in [(2, 2), (8, 8), (13, 7)]:
        for p in (0.3, 0.6, 0.9):
            t = rng.random(shape) < p
            for axis in (0, 1):
                for star8 in (False, True):
                    a = pyk.crossing_parents(t, axis, star8)
                    b = ck.crossing_parents(np.ascontiguousarray(t), axis, star8)
                    assert a[0] == b[0]
                    assert np.array_equal(a[1], b[1])


def test_monotone_parity(cases):
    for n, e, indptr, indices, ages, mask in cases:
        assert np.array_equal(
            pyk.monotone_sizes(indptr, indices, ages),
            ck.monotone_sizes(indptr, indices, ages),
        )
        assert np.array_equal(
            pyk.monotone_from(indptr, indices, ages, 0),
            ck.monotone_from(indptr, indices, ages, 0),
        )


def test_peel_parity(cases):
    for n, e, indptr, indices, ages, mask in cases:
        for k in (1, 2, 3, 6):
            a_ok, a_order, a_core = pyk.peel_min_degree(indptr, indices, k)
            b_ok, b_order, b_core = ck.peel_min_degree(indptr, indices, k)
            assert a_ok == b_ok
            assert np.array_equal(a_order, b_order)
            assert np.array_equal(a_core, b_core)


def test_treewidth_parity():
    rng = np.random.default_rng(3)
    for _ in range(25):
        n = int(rng.integers(1, 9))
        adj = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        assert pyk.treewidth_exact(adj, n) == ck.treewidth_exact(adj, n)
        for cap in (1, 3):
            assert pyk.balanced_separator_exists(adj, n, cap) == ck.balanced_separator_exists(
                adj, n, cap
            )


def test_sweep_parity_small():
    for n in (1, 2, 3, 4, 5):
        assert pyk.separator_sweep(n) == ck.separator_sweep(n)


def test_backend_reports_compiled():
    assert backend_name() in ("compiled", "python")
