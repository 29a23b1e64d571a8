"""Property-based checks over randomized structures."""

import io

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from layersim import (
    Graph,
    CrossingRectangle,
    ages_to_permutation,
    compute_layers,
    crossing_duality_check,
    cycle,
    cycle_segment_stats,
    degeneracy_order,
    exact_treewidth,
    induced_Tk,
    is_forest,
    is_independent_set,
    load_graph,
    max_component_vs_max_monotone,
    monotone_component,
    permutation_to_ages,
    random_configuration,
    sample_ages,
    save_graph,
    smooth_degree_pair,
    smooth_until_balanced,
)
from layersim.treewidth import molloy_reed_from_degrees

SETTINGS = dict(max_examples=60, deadline=None)


@st.composite
def permutations(draw):
    n = draw(st.integers(1, 50))
    perm = np.arange(n)
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    rng.shuffle(perm)
    return perm


@st.composite
def small_graphs(draw, max_n=40, multi=False):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, 2 * max_n))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    edges = rng.integers(0, n, size=(m, 2))
    if not multi:
        edges = edges[edges[:, 0] != edges[:, 1]]
        edges = np.unique(np.sort(edges, axis=1), axis=0) if len(edges) else edges
    return Graph.from_edges(n, edges.astype(np.int64).reshape(-1, 2))


@given(permutations())
@settings(**SETTINGS)
def test_permutation_roundtrip(perm):
    assert np.array_equal(ages_to_permutation(permutation_to_ages(perm)), perm)


@given(small_graphs(multi=True), st.integers(0, 2**31 - 1))
@settings(**SETTINGS)
def test_layer_structure(g, seed):
    ages = sample_ages(g, seed)
    layers = compute_layers(g, ages)
    loops = g.edges[g.edges[:, 0] == g.edges[:, 1], 0]
    hi = g.degrees.copy()
    if len(loops):
        hi -= 2 * np.bincount(loops, minlength=g.n)
    assert np.all(layers >= 1) and np.all(layers <= hi + 1)
    assert is_independent_set(g, layers <= 1)
    assert is_forest(induced_Tk(g, layers, 2).graph)
    for k in range(1, int(hi.max(initial=0)) + 2):
        assert degeneracy_order(induced_Tk(g, layers, k).graph, k).succeeded


@given(small_graphs(multi=True), st.integers(0, 2**31 - 1))
@settings(**SETTINGS)
def test_monotone_domination_and_membership(g, seed):
    ages = sample_ages(g, seed)
    largest_t2, largest_mono = max_component_vs_max_monotone(g, ages)
    assert largest_t2 <= largest_mono
    v = int(seed % g.n)
    comp = monotone_component(g, ages, v)
    members = set(comp.tolist())
    assert v in members
    for w in members - {v}:
        preds = [
            u for u in map(int, g.neighbors(w)) if u in members and ages[u] > ages[w]
        ]
        assert preds, "every member needs an in-component older neighbor"


@given(st.integers(3, 120), st.integers(0, 2**31 - 1))
@settings(**SETTINGS)
def test_segment_stats_conservation(n, seed):
    g = cycle(n)
    layers = compute_layers(g, sample_ages(g, seed))
    stats = cycle_segment_stats(g, layers)
    if not stats.degenerate:
        assert sum(k * c for k, c in stats.histogram.items()) == stats.masked_count
        assert stats.run_count == n - stats.masked_count


@given(st.integers(0, 8), st.integers(2, 12))
@settings(**SETTINGS)
def test_smoothing_decreases_sum(d, gap):
    d_prime = d + gap
    (a, b), delta = smooth_degree_pair(d, d_prime)
    assert a + b == d + d_prime
    assert delta == 2 * (d_prime - d - 1) > 0


@given(st.lists(st.integers(0, 10), min_size=1, max_size=12))
@settings(**SETTINGS)
def test_smoothing_fixpoint_never_raises_q(degrees):
    arr = np.array(degrees)
    out, total = smooth_until_balanced(arr)
    assert out.max() - out.min() <= 1
    assert total >= 0
    if len(arr) > 0:
        q_before = molloy_reed_from_degrees(arr)
        q_after = molloy_reed_from_degrees(out)
        assert q_after <= q_before


@given(st.floats(0.1, 0.9), st.integers(0, 2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_duality_on_random_boxes(p, seed):
    cfg = random_configuration(3, p, seed)
    assert crossing_duality_check(cfg, CrossingRectangle(-3, -3, 2, 2))


@given(small_graphs(max_n=7), st.integers(0, 2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_treewidth_monotone_under_vertex_deletion(g, seed):
    tw = exact_treewidth(g)
    assert tw <= max(0, g.n - 1)
    if g.n >= 2:
        mask = np.ones(g.n, dtype=bool)
        mask[seed % g.n] = False
        from layersim import induced_subgraph

        sub, _ = induced_subgraph(g, mask)
        assert exact_treewidth(sub) <= tw


@given(small_graphs(multi=True))
@settings(**SETTINGS)
def test_edge_list_roundtrip(g):
    buf = io.StringIO()
    save_graph(g, buf)
    buf.seek(0)
    assert load_graph(buf) == g
