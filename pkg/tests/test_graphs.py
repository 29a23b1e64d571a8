"""Generator contracts: shapes, degrees, determinism, serialization."""

import io
from fractions import Fraction

import numpy as np
import pytest

from layersim import (
    DegreeSequence,
    Graph,
    InvalidParameterError,
    UnsupportedInputError,
    complete_binary_tree,
    configuration_model,
    cycle,
    cycle_plus_matching,
    d_ary_tree,
    grid_box,
    grid_index,
    load_graph,
    path,
    random_simple_regular,
    save_graph,
    star_collection,
    subdivide_edges,
)


def girth(g: Graph) -> float:
    """Shortest cycle length by BFS from every vertex (test-local oracle)."""
    best = float("inf")
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        while queue:
            u = queue.pop(0)
            for v in map(int, g.neighbors(u)):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


class TestGraphType:
    def test_simple_flag_rejects_loops(self):
        with pytest.raises(InvalidParameterError):
            Graph(2, [(0, 0)], is_multigraph=False)

    def test_simple_flag_rejects_parallel(self):
        with pytest.raises(InvalidParameterError):
            Graph(2, [(0, 1), (1, 0)], is_multigraph=False)

    def test_from_edges_detects_multigraph(self):
        assert Graph.from_edges(2, [(0, 1), (1, 0)]).is_multigraph
        assert Graph.from_edges(3, [(0, 0)]).is_multigraph
        assert not Graph.from_edges(3, [(0, 1), (1, 2)]).is_multigraph

    def test_degree_sum_counts_loops_twice(self):
        g = Graph.from_edges(2, [(0, 0), (0, 1)])
        assert g.degrees.tolist() == [3, 1]
        g.validate()

    def test_out_of_range_endpoint(self):
        with pytest.raises(InvalidParameterError):
            Graph(2, [(0, 2)])

    def test_csr_sorted_and_symmetric(self):
        g = Graph.from_edges(4, [(2, 1), (0, 3), (1, 0), (1, 3)])
        for v in range(4):
            nbrs = g.neighbors(v)
            assert np.all(np.diff(nbrs) >= 0)
        g.validate()


class TestCyclePlusMatching:
    def test_small_counts(self):
        g = cycle_plus_matching(6, seed=0)
        assert g.m == 9
        assert np.all(g.degrees == 3)

    def test_odd_rejected(self):
        with pytest.raises(InvalidParameterError):
            cycle_plus_matching(5, seed=0)

    def test_too_small_rejected(self):
        with pytest.raises(InvalidParameterError):
            cycle_plus_matching(2, seed=0)

    def test_determinism_large(self):
        a = cycle_plus_matching(10_000, seed=42)
        b = cycle_plus_matching(10_000, seed=42)
        assert np.array_equal(a.edges, b.edges)
        assert a.is_multigraph == b.is_multigraph

    def test_three_regular_many_seeds(self):
        for seed in range(25):
            g = cycle_plus_matching(48, seed=seed)
            assert np.all(g.degrees == 3)
            g.validate()


def _enumerate_pairings(stubs):
    """All perfect matchings of the stub list (recursive; oracle only)."""
    if not stubs:
        yield []
        return
    first = stubs[0]
    for i in range(1, len(stubs)):
        rest = stubs[1:i] + stubs[i + 1:]
        for match in _enumerate_pairings(rest):
            yield [(first, stubs[i])] + match


class TestConfigurationModel:
    def test_forced_degrees(self):
        g = configuration_model(DegreeSequence(((3, 2),)), seed=5)
        assert g.degrees.tolist() == [3, 3]

    def test_odd_sum_rejected(self):
        with pytest.raises(InvalidParameterError):
            configuration_model(DegreeSequence(((1, 3),)), seed=0)

    def test_degrees_exact_every_seed(self):
        seq = DegreeSequence(((1, 5), (2, 4), (3, 3), (4, 2)))
        for seed in range(10):
            g = configuration_model(seq, seed)
            assert np.array_equal(np.sort(g.degrees), np.sort(seq.expand()))

    def test_loop_rate_against_enumeration(self):
        # oracle: enumerate all 11!! pairings of 12 half-edges on 4 cubic vertices
        stubs = [0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3]
        total = 0
        loops_at_0 = 0
        for match in _enumerate_pairings(stubs):
            total += 1
            loops_at_0 += sum(1 for a, b in match if a == b == 0)
        assert total == 10395
        exact = Fraction(loops_at_0, total)
        assert exact == Fraction(3, 11)  # C(3,2) / (3*4 - 1)
        # the same formula at n = 1000, checked by simulation
        n, samples = 1000, 10_000
        expect = 3 / (3 * n - 1)
        hits = 0
        for seed in range(samples):
            g = configuration_model(DegreeSequence.regular(3, n), seed)
            hits += int(np.sum((g.edges[:, 0] == 0) & (g.edges[:, 1] == 0)))
        se = np.sqrt(expect / samples)  # rare event: Poisson-like
        assert abs(hits / samples - expect) <= 4 * se

    def test_random_simple_regular_is_simple(self):
        g = random_simple_regular(3, 50, seed=3)
        assert not g.is_multigraph
        assert np.all(g.degrees == 3)


class TestTrees:
    def test_binary_tree_small(self):
        g = complete_binary_tree(4)
        assert g.n == 3
        assert sorted(g.degrees.tolist()) == [1, 1, 2]

    def test_binary_tree_single_vertex(self):
        g = complete_binary_tree(2)
        assert g.n == 1 and g.m == 0

    def test_binary_tree_1024(self):
        g = complete_binary_tree(1024)
        assert g.n == 1023
        leaves = int((g.degrees == 1).sum())
        assert leaves == 512

    def test_binary_tree_bad_size(self):
        for bad in (3, 6, 0, 1):
            with pytest.raises(InvalidParameterError):
                complete_binary_tree(bad)

    def test_d_ary_counts(self):
        assert d_ary_tree(2, 0).n == 1
        assert d_ary_tree(2, 2).n == 7
        assert d_ary_tree(3, 4).n == 121

    def test_d_ary_every_internal_has_d_children(self):
        g = d_ary_tree(3, 3)
        internal = (3 ** 3 - 1) // 2  # vertices above the last level: 13
        assert g.degrees[0] == 3
        assert np.all(g.degrees[1:internal] == 4)
        assert np.all(g.degrees[internal:] == 1)


class TestGridBox:
    def test_counts(self):
        g = grid_box(2)
        assert g.n == 25
        assert g.m == 40  # 5x5 grid: 2 * 5 * 4

    def test_degrees(self):
        g = grid_box(1)
        degs = sorted(g.degrees.tolist())
        assert degs == [2, 2, 2, 2, 3, 3, 3, 3, 4]

    def test_coordinate_roundtrip(self):
        g = grid_box(3)
        for x, y in [(0, 0), (-3, 3), (2, -1)]:
            idx = grid_index(g, x, y)
            assert tuple(g.coords[idx]) == (x, y)

    def test_out_of_box(self):
        with pytest.raises(InvalidParameterError):
            grid_index(grid_box(2), 3, 0)


class TestStars:
    def test_single_star(self):
        g = star_collection(1, 3)
        assert g.n == 4 and g.degrees[0] == 3

    def test_two_paths(self):
        g = star_collection(2, 2)
        assert sorted(g.degrees.tolist()) == [1, 1, 1, 1, 2, 2]

    def test_counting(self):
        g = star_collection(100, 100)
        assert g.n == 10_100 and g.m == 10_000


class TestSubdivision:
    def test_single_edge(self):
        g, origin = subdivide_edges(path(2))
        assert g.n == 4 and g.m == 3
        assert sorted(g.degrees.tolist()) == [1, 1, 2, 2]
        assert origin.tolist() == [-1, -1, 0, 0]

    def test_triangle_becomes_nine_cycle(self):
        g, _ = subdivide_edges(cycle(3))
        assert g.n == 9 and g.m == 9
        assert np.all(g.degrees == 2)
        assert girth(g) == 9

    def test_regular_counts_and_girth(self):
        base = random_simple_regular(3, 20, seed=7)
        g, origin = subdivide_edges(base)
        assert g.n == base.n + 3 * base.n  # m = 3n/2 edges, two new vertices each
        assert g.max_degree == base.max_degree
        assert np.all(g.degrees[:base.n] == base.degrees)
        assert girth(g) >= 3 * girth(base)
        assert np.all(origin[:base.n] == -1) and np.all(origin[base.n:] >= 0)

    def test_multigraph_rejected(self):
        g = Graph.from_edges(2, [(0, 1), (0, 1)])
        with pytest.raises(UnsupportedInputError):
            subdivide_edges(g)


class TestSerialization:
    def test_roundtrip(self):
        g = cycle_plus_matching(30, seed=2)
        buf = io.StringIO()
        save_graph(g, buf)
        buf.seek(0)
        h = load_graph(buf)
        assert g == h

    def test_header_multigraph_flag(self):
        g = Graph.from_edges(2, [(0, 1), (0, 1)])
        buf = io.StringIO()
        save_graph(g, buf)
        assert buf.getvalue().splitlines()[0] == "2 2 multi"

    def test_bad_header(self):
        with pytest.raises(InvalidParameterError):
            load_graph(io.StringIO("not a header\n"))


class TestDegreeSequence:
    def test_counts(self):
        seq = DegreeSequence(((3, 2), (1, 4)))
        assert seq.vertex_count == 6
        assert seq.degree_sum == 10
        assert seq.expand().tolist() == [3, 3, 1, 1, 1, 1]

    def test_fractions_sum_to_one(self):
        seq = DegreeSequence(((3, 2), (1, 4)))
        assert sum(seq.fractions().values()) == Fraction(1)

    def test_invalid_entries(self):
        with pytest.raises(InvalidParameterError):
            DegreeSequence(((-1, 2),))
        with pytest.raises(InvalidParameterError):
            DegreeSequence(((2, 0),))
