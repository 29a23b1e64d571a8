"""Molloy-Reed arithmetic, the auxiliary multigraph, and treewidth oracles."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from layersim import (
    Graph,
    InvalidParameterError,
    SizeError,
    balanced_separator_exists,
    build_auxiliary_H,
    complete,
    compute_layers,
    configuration_model,
    cycle,
    cycle_plus_matching,
    d_ary_tree,
    DegreeSequence,
    exact_treewidth,
    giant_component_trial,
    grid_box,
    molloy_reed_Q,
    molloy_reed_from_degrees,
    path,
    sample_ages,
    separator_bound_sweep,
    smooth_degree_pair,
    smooth_until_balanced,
    trial_rng,
    two_stage_treewidth_evidence,
)


class TestMolloyReed:
    def test_worst_case_value(self):
        lam = {1: Fraction(21, 30), 2: Fraction(5, 30), 3: Fraction(2, 30), 4: Fraction(2, 30)}
        assert molloy_reed_Q(lam) == Fraction(1, 30)

    def test_regular(self):
        for d in range(1, 7):
            assert molloy_reed_Q({d: Fraction(1)}) == d * (d - 2)

    def test_degree_one_only(self):
        assert molloy_reed_Q({1: Fraction(1)}) == -1

    def test_sum_must_be_one(self):
        with pytest.raises(InvalidParameterError):
            molloy_reed_Q({1: Fraction(1, 2), 3: Fraction(1, 3)})

    def test_from_degrees(self):
        assert molloy_reed_from_degrees(np.array([3, 3, 3])) == 3
        assert molloy_reed_from_degrees(np.array([])) == 0


class TestSmoothing:
    def test_examples(self):
        assert smooth_degree_pair(3, 5) == ((4, 4), 2)
        assert smooth_degree_pair(1, 3) == ((2, 2), 2)
        assert smooth_degree_pair(2, 7) == ((3, 6), 8)

    def test_gap_too_small(self):
        with pytest.raises(InvalidParameterError):
            smooth_degree_pair(3, 4)

    def test_delta_matches_direct_evaluation(self):
        for d, dp in [(0, 2), (1, 5), (3, 9), (4, 6)]:
            (a, b), delta = smooth_degree_pair(d, dp)
            before = d * (d - 2) + dp * (dp - 2)
            after = a * (a - 2) + b * (b - 2)
            assert before - after == delta
            assert delta > 0

    def test_fixpoint_spread_at_most_one(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            degs = rng.integers(0, 12, size=rng.integers(2, 15))
            out, total = smooth_until_balanced(degs)
            assert out.max() - out.min() <= 1
            assert out.sum() == degs.sum() and len(out) == len(degs)
            assert total >= 0


class TestAuxiliaryH:
    def _sample(self, n, seed):
        g = cycle(n)
        rng = trial_rng(seed, 0)
        layers = compute_layers(g, sample_ages(g, rng))
        matching = rng.permutation(n).reshape(-1, 2)
        return layers, matching

    def test_total_degree_is_n(self):
        for seed in range(5):
            layers, matching = self._sample(500, seed)
            h = build_auxiliary_H(layers, matching)
            assert int(h.graph.degrees.sum()) == 500
            assert int(h.u1_degrees.sum()) + h.u2_count == 500

    def test_degree_sequence_ignores_matching(self):
        layers, m1 = self._sample(400, 1)
        rng = trial_rng(99, 1)
        m2 = rng.permutation(400).reshape(-1, 2)
        h1 = build_auxiliary_H(layers, m1)
        h2 = build_auxiliary_H(layers, m2)
        assert np.array_equal(h1.degree_sequence(), h2.degree_sequence())

    def test_u1_degrees_are_run_lengths(self):
        layers, matching = self._sample(300, 2)
        h = build_auxiliary_H(layers, matching)
        member = layers <= 2
        assert int(h.u1_degrees.sum()) == int(member.sum())
        assert h.u2_count == int((~member).sum())

    def test_invalid_matching(self):
        layers, _ = self._sample(10, 3)
        with pytest.raises(InvalidParameterError):
            build_auxiliary_H(layers, np.array([[0, 1], [1, 2], [3, 4], [5, 6], [7, 8]]))

    def test_all_masked_degenerate(self):
        layers = np.ones(6, dtype=np.int64)
        matching = np.array([[0, 3], [1, 4], [2, 5]])
        h = build_auxiliary_H(layers, matching)
        assert h.u1_degrees.tolist() == [6] and h.u2_count == 0
        assert h.graph.n == 1 and h.graph.m == 3  # three self-loops


class TestGiantTrial:
    def test_t3_keeps_max_degree_two_graph(self):
        trial = giant_component_trial(cycle(200), ("tk", 3), 0.5, seed=1)
        assert trial.fraction == 1.0 and trial.passed

    def test_p_zero(self):
        trial = giant_component_trial(cycle(50), ("percolation", 0.0), 0.5, seed=1)
        assert trial.fraction == 0.0 and not trial.passed

    def test_delta_validation(self):
        with pytest.raises(InvalidParameterError):
            giant_component_trial(cycle(10), ("tk", 3), 1.5, seed=0)

    def test_unknown_source(self):
        with pytest.raises(InvalidParameterError):
            giant_component_trial(cycle(10), ("bogus", 3), 0.5, seed=0)


def treewidth_by_all_orders(g: Graph) -> int:
    """Independent oracle: simulate every elimination order with explicit fill."""
    base = [set() for _ in range(g.n)]
    for u, v in g.edges:
        if u != v:
            base[u].add(int(v))
            base[v].add(int(u))
    best = g.n
    for order in itertools.permutations(range(g.n)):
        adj = [s.copy() for s in base]
        width = 0
        alive = set(range(g.n))
        for v in order:
            nbrs = adj[v] & alive
            width = max(width, len(nbrs))
            if width >= best:
                break
            for a in nbrs:
                for b in nbrs:
                    if a != b:
                        adj[a].add(b)
            alive.remove(v)
        best = min(best, width)
    return best


class TestExactTreewidth:
    def test_known_values(self):
        assert exact_treewidth(d_ary_tree(2, 2)) == 1
        assert exact_treewidth(path(7)) == 1
        assert exact_treewidth(cycle(8)) == 2
        assert exact_treewidth(complete(4)) == 3
        assert exact_treewidth(grid_box(1)) == 3

    def test_single_vertex_and_empty(self):
        assert exact_treewidth(Graph(1, np.empty((0, 2), dtype=np.int64))) == 0
        assert exact_treewidth(Graph(0, np.empty((0, 2), dtype=np.int64))) == -1

    def test_against_all_orders_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(12):
            n = int(rng.integers(3, 7))
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            keep = rng.random(len(pairs)) < 0.5
            g = Graph(n, np.array([p for p, k in zip(pairs, keep) if k], dtype=np.int64).reshape(-1, 2))
            assert exact_treewidth(g) == treewidth_by_all_orders(g)

    def test_multigraph_simplification(self):
        g = Graph.from_edges(3, [(0, 1), (0, 1), (1, 2), (2, 2)])
        assert exact_treewidth(g) == 1

    def test_size_guard(self):
        with pytest.raises(SizeError):
            exact_treewidth(cycle(13))


class TestSeparatorBound:
    def test_random_small_graphs(self):
        rng = np.random.default_rng(23)
        for _ in range(15):
            n = int(rng.integers(2, 10))
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            keep = rng.random(len(pairs)) < 0.45
            g = Graph(n, np.array([p for p, k in zip(pairs, keep) if k], dtype=np.int64).reshape(-1, 2))
            tw = exact_treewidth(g)
            assert balanced_separator_exists(g, tw + 1)

    def test_sweep_small(self):
        graphs, connected, violations = separator_bound_sweep(4)
        assert graphs == 64 and violations == 0
        assert connected == 38  # labeled connected graphs on 4 vertices


class TestTwoStage:
    def test_parameter_validation(self):
        g = cycle(10)
        for p, q in [(0.5, 0.5), (0.7, 0.6), (0.0, 0.5), (0.5, 1.1)]:
            with pytest.raises(InvalidParameterError):
                two_stage_treewidth_evidence(g, p, q, 1, seed=0)

    def test_q_one_keeps_everything(self):
        g = cycle(40)
        rows = two_stage_treewidth_evidence(g, 0.5, 1.0, 2, seed=3)
        for r in rows:
            if r.stage == "q":
                assert r.kept == 40 and r.largest_fraction == 1.0

    def test_small_graph_reports_treewidth(self):
        g = complete(4)
        rows = two_stage_treewidth_evidence(g, 0.4, 0.9, 3, seed=4)
        for r in rows:
            if r.stage == "q":
                assert r.treewidth is not None and 0 <= r.treewidth <= 3
            else:
                assert r.treewidth is None

    def test_stage_p_subset_of_stage_q(self):
        g = cycle_plus_matching(300, seed=6)
        rows = two_stage_treewidth_evidence(g, 0.4, 0.8, 4, seed=7)
        by_trial = {}
        for r in rows:
            by_trial.setdefault(r.trial, {})[r.stage] = r.kept
        for stages in by_trial.values():
            assert stages["p"] <= stages["q"]

    def test_q_value_sign_tracks_density(self):
        g = configuration_model(DegreeSequence.regular(3, 2000), seed=8)
        rows = two_stage_treewidth_evidence(g, 0.75, 0.95, 3, seed=9)
        for r in rows:
            assert r.q_value > 0  # far above threshold at these retention rates
