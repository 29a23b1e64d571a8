"""Components, monotone components, segment statistics, tree survival."""

import math
from fractions import Fraction

import numpy as np
import pytest

from layersim import (
    Graph,
    InvalidModeError,
    SizeError,
    binary_tree_survival,
    complete_binary_tree,
    compute_layers,
    connected_components,
    cycle,
    cycle_plus_matching,
    cycle_segment_stats,
    d_ary_tree,
    grid_box,
    grid_index,
    is_forest,
    is_independent_set,
    max_component_vs_max_monotone,
    monotone_component,
    monotone_component_sizes,
    path,
    sample_ages,
    trial_rng,
)


class TestConnectedComponents:
    def test_full_mask_connected(self):
        g = cycle(30)
        s = connected_components(g, None, "graph")
        assert s.count == 1 and s.largest == 30

    def test_empty_mask(self):
        g = cycle(10)
        s = connected_components(g, np.zeros(10, dtype=bool), "graph")
        assert s.count == 0 and s.largest == 0 and not s.sizes.size

    def test_star8_vs_grid4_on_diagonal(self):
        g = grid_box(1)
        mask = np.zeros(9, dtype=bool)
        for x, y in [(-1, -1), (-1, 1), (1, -1), (1, 1), (0, 0)]:
            mask[grid_index(g, x, y)] = True
        assert connected_components(g, mask, "star8").count == 1
        assert connected_components(g, mask, "grid4").count == 5

    def test_graph_mode_equals_grid4_mode(self):
        g = grid_box(6)
        for t in range(5):
            rng = trial_rng(77, t)
            mask = rng.random(g.n) < 0.55
            a = connected_components(g, mask, "graph")
            b = connected_components(g, mask, "grid4")
            assert np.array_equal(a.component_id, b.component_id)
            assert np.array_equal(a.sizes, b.sizes)

    def test_grid_mode_needs_coords(self):
        with pytest.raises(InvalidModeError):
            connected_components(cycle(9), None, "grid4")

    def test_unknown_mode(self):
        with pytest.raises(InvalidModeError):
            connected_components(cycle(9), None, "hex")

    def test_sizes_sum_to_mask(self):
        g = cycle_plus_matching(200, seed=1)
        mask = trial_rng(5, 0).random(g.n) < 0.6
        s = connected_components(g, mask, "graph")
        assert int(s.sizes.sum()) == int(mask.sum())
        assert s.largest == (s.sizes.max() if s.count else 0)


class TestMonotone:
    def test_minimum_age_is_singleton(self):
        g = cycle(9)
        ages = sample_ages(g, seed=2)
        v = int(np.argmin(ages))
        assert monotone_component(g, ages, v).tolist() == [v]

    def test_path_descending(self):
        assert sorted(monotone_component(path(3), np.array([0.9, 0.5, 0.1]), 0)) == [0, 1, 2]

    def test_sizes_match_single_source(self):
        g = cycle_plus_matching(60, seed=3)
        ages = sample_ages(g, seed=4)
        sizes = monotone_component_sizes(g, ages)
        for v in range(0, 60, 7):
            assert sizes[v] == len(monotone_component(g, ages, v))

    def test_single_vertex_pair(self):
        g = Graph(1, np.empty((0, 2), dtype=np.int64))
        assert max_component_vs_max_monotone(g, np.array([0.5])) == (1, 1)

    def test_domination_on_samples(self):
        for t in range(20):
            rng = trial_rng(11, t)
            g = cycle_plus_matching(100, rng)
            a, b = max_component_vs_max_monotone(g, sample_ages(g, rng))
            assert a <= b

    def test_hand_example(self):
        assert max_component_vs_max_monotone(path(3), np.array([0.9, 0.5, 0.1])) == (3, 3)

    def test_direction_alignment_regression(self):
        # With ages 0.9, 0.2, 0.8 the downward traversal tops out at 2 while the
        # full path sits in the first two layers; the upward traversal covers it.
        g = path(3)
        assert max_component_vs_max_monotone(g, np.array([0.9, 0.2, 0.8])) == (3, 3)


class TestSegmentStats:
    def test_invariants(self):
        g = cycle(500)
        for t in range(10):
            layers = compute_layers(g, sample_ages(g, trial_rng(13, t)))
            stats = cycle_segment_stats(g, layers)
            assert sum(k * c for k, c in stats.histogram.items()) == stats.masked_count
            assert stats.run_count == g.n - stats.masked_count  # each outsider cuts once
            assert not stats.degenerate

    def test_non_cycle_rejected(self):
        g = path(6)
        with pytest.raises(InvalidModeError):
            cycle_segment_stats(g, np.ones(6, dtype=np.int64))

    def test_degenerate_all_masked(self):
        g = cycle(8)
        stats = cycle_segment_stats(g, np.ones(8, dtype=np.int64))
        assert stats.degenerate and stats.histogram == {8: 1}

    def test_all_outside(self):
        g = cycle(8)
        stats = cycle_segment_stats(g, np.full(8, 9, dtype=np.int64))
        assert stats.histogram == {} and stats.run_count == 0

    def test_known_pattern(self):
        # mask 1,1,0,1,0,0,1,1 around the cycle: a wrapped run 6,7,0,1 and {3}
        g = cycle(8)
        layers = np.array([1, 2, 5, 1, 7, 9, 2, 2])
        stats = cycle_segment_stats(g, layers)
        assert stats.histogram == {1: 1, 4: 1}
        assert stats.prefix_probability(1) == 1 / 8

    def test_p_hat_table(self):
        g = cycle(8)
        stats = cycle_segment_stats(g, np.array([1, 2, 5, 1, 7, 9, 2, 2]))
        assert np.allclose(stats.p_hat_table(4), [1 / 8, 0.0, 0.0, 1 / 8])


class TestBinaryTreeSurvival:
    def test_exact_four(self):
        assert binary_tree_survival(4, "exact") == Fraction(2, 3)

    def test_paper_lower_bound(self):
        for k in (2, 4, 8):
            assert binary_tree_survival(k, "exact") >= Fraction(1, 4 ** k)

    def test_exact_vs_montecarlo(self):
        exact = float(binary_tree_survival(8, "exact"))
        trials = 20_000
        mc = binary_tree_survival(8, "montecarlo", seed=5, trials=trials)
        se = math.sqrt(exact * (1 - exact) / trials)
        assert abs(mc - exact) <= 3 * se

    def test_too_large_for_exact(self):
        with pytest.raises(SizeError):
            binary_tree_survival(16, "exact")

    def test_montecarlo_needs_trials(self):
        with pytest.raises(Exception):
            binary_tree_survival(4, "montecarlo", seed=1, trials=0)


class TestStructureChecks:
    def test_forest_detects_cycle(self):
        assert is_forest(d_ary_tree(2, 4))
        assert not is_forest(cycle(5))
        assert not is_forest(Graph.from_edges(2, [(0, 1), (0, 1)]))  # parallel pair
        assert is_forest(Graph.from_edges(2, [(0, 0), (0, 1)]))  # loop ignored

    def test_independent_set(self):
        g = path(4)
        assert is_independent_set(g, np.array([True, False, True, False]))
        assert not is_independent_set(g, np.array([True, True, False, False]))


class TestLargeTreeComponent:
    def test_t2_component_at_least_log_over_ten(self):
        # largest two-layer component on a million-vertex complete binary tree
        g = complete_binary_tree(2 ** 20)
        need = math.log2(2 ** 20) / 10  # = 2
        hits = 0
        trials = 20
        for t in range(trials):
            rng = trial_rng(21, t)
            layers = compute_layers(g, sample_ages(g, rng))
            s = connected_components(g, layers <= 2, "graph")
            hits += s.largest >= need
        assert hits >= 0.95 * trials
