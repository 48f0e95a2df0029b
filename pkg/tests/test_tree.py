import numpy as np
import pytest

from nusamp.sampling import empirical_mse, optimal_samples
from nusamp.signals import AnalyticSignalSpec, UniformSignal, generate
from nusamp.tree import (
    build_full_tree,
    prune,
    rate_distortion_sweep,
    tree_rate_bits,
    tree_sample,
)


def random_signal(seed, n_grid=1024):
    rng = np.random.default_rng(seed)
    # smooth-ish random walk keeps node errors well spread across scales
    return UniformSignal.from_values(np.cumsum(rng.normal(0, 1, n_grid)))


def simulate_prune(tree, leaf_cost):
    """Re-run the bottom-up sweep independently, tracking each merge's cost delta."""
    masks = [mask.copy() for mask in tree.leaf_mask]
    deltas = []
    for level in range(tree.depth, 0, -1):
        fired = False
        for parent in range(1 << (level - 1)):
            left, right = 2 * parent, 2 * parent + 1
            if not (masks[level][left] and masks[level][right]):
                continue
            keep = tree.errors[level][left] + tree.errors[level][right] + 2 * leaf_cost
            merged = tree.errors[level - 1][parent] + leaf_cost
            if keep > merged:
                masks[level][left] = masks[level][right] = False
                masks[level - 1][parent] = True
                deltas.append(merged - keep)
                fired = True
        if not fired:
            break
    return masks, deltas


class TestBuildFullTree:
    def test_constant_signal_has_zero_errors(self):
        tree = build_full_tree(UniformSignal.from_values(np.full(256, 4.0)), 5)
        assert all(np.allclose(err, 0.0) for err in tree.errors)

    def test_depth_zero_single_leaf(self):
        sig = generate(AnalyticSignalSpec("linear"), 128)
        tree = build_full_tree(sig, 0)
        assert tree.leaf_count() == 1
        assert tree.leaf_intervals()[0][:2] == (0, 128)

    def test_linear_leaf_errors_match_interval_variance(self):
        sig = generate(AnalyticSignalSpec("linear", slope=1.0), 2**12)
        tree = build_full_tree(sig, 1)
        # integral of squared deviation of a unit-slope line over a half interval
        expected = (0.5**3) / 12.0
        assert tree.errors[1] == pytest.approx([expected, expected], rel=1e-5)

    def test_indivisible_grid_rejected(self):
        sig = UniformSignal.from_values(np.arange(100, dtype=float))
        with pytest.raises(ValueError):
            build_full_tree(sig, 3)

    def test_parent_error_at_least_children_sum(self):
        tree = build_full_tree(random_signal(0), 8)
        for level in range(1, tree.depth + 1):
            children = tree.errors[level][0::2] + tree.errors[level][1::2]
            assert np.all(tree.errors[level - 1] >= children - 1e-9)


class TestPrune:
    def test_constant_signal_collapses_to_root(self):
        sig = UniformSignal.from_values(np.full(256, 1.0))
        tree = build_full_tree(sig, 6)
        for mu in (1e-12, 1.0, 1e9):
            assert prune(tree, mu).leaf_count() == 1

    def test_zero_cost_keeps_full_tree(self):
        tree = build_full_tree(random_signal(1), 7)
        assert prune(tree, 0.0).leaf_count() == 1 << 7

    def test_negative_cost_rejected(self):
        tree = build_full_tree(random_signal(2), 4)
        with pytest.raises(ValueError):
            prune(tree, -1.0)

    def test_does_not_mutate_input(self):
        tree = build_full_tree(random_signal(3), 6)
        before = [mask.copy() for mask in tree.leaf_mask]
        prune(tree, tree.root_error() / 10)
        assert all(np.array_equal(a, b) for a, b in zip(before, tree.leaf_mask))

    @pytest.mark.parametrize("seed", range(5))
    def test_every_merge_lowers_the_priced_cost(self, seed):
        tree = build_full_tree(random_signal(seed), 8)
        leaf_cost = tree.root_error() / 50
        masks, deltas = simulate_prune(tree, leaf_cost)
        pruned = prune(tree, leaf_cost)
        assert all(np.array_equal(a, b) for a, b in zip(masks, pruned.leaf_mask))
        assert deltas  # the sweep did something at this price
        assert all(delta < 0 for delta in deltas)

    def test_leaf_count_non_increasing_in_price(self):
        tree = build_full_tree(random_signal(9), 8)
        top = tree.root_error() * 1.05
        counts = [
            prune(tree, mu).leaf_count()
            for mu in np.logspace(np.log10(top * 1e-9), np.log10(top), 32)
        ]
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_no_prunable_pair_survives(self):
        tree = prune(build_full_tree(random_signal(4), 8), 1e-3)
        for level in range(1, tree.depth + 1):
            mask = tree.leaf_mask[level]
            pair = mask[0::2] & mask[1::2]
            keep = tree.errors[level][0::2] + tree.errors[level][1::2] + 2e-3
            merged = tree.errors[level - 1] + 1e-3
            assert not np.any(pair & (keep > merged))


class TestTreeSampling:
    def test_leaves_tile_domain(self):
        tree = prune(build_full_tree(random_signal(5), 8), 1e-2)
        intervals = tree.leaf_intervals()
        assert intervals[0][0] == 0
        assert intervals[-1][1] == tree.n_grid
        for (_, right, _, _), (left, _, _, _) in zip(intervals, intervals[1:]):
            assert right == left

    def test_tree_mse_equals_optimal_sampling_on_same_segmentation(self):
        sig = random_signal(6)
        tree = prune(build_full_tree(sig, 8), 1e-2)
        via_tree = empirical_mse(sig, tree_sample(tree))
        via_sampler = empirical_mse(sig, optimal_samples(sig, tree.segmentation()))
        assert via_tree == pytest.approx(via_sampler, rel=1e-12)

    def test_single_leaf_rate(self):
        sig = UniformSignal.from_values(np.full(64, 2.0))
        tree = prune(build_full_tree(sig, 6), 1.0)
        assert tree_rate_bits(tree, 8) == 9

    def test_full_depth_two_rate(self):
        sig = generate(AnalyticSignalSpec("linear"), 64)
        tree = build_full_tree(sig, 2)
        assert tree_rate_bits(tree, 8) == 7 + 4 * 8


class TestRateDistortionSweep:
    def test_rows_and_tradeoff(self):
        sig = random_signal(7, 2048)
        full = build_full_tree(sig, 8)
        grid = np.logspace(-6, 0, 12) * full.root_error()
        rows = rate_distortion_sweep(sig, 8, grid)
        assert [set(r) for r in rows] == [{"mu", "leaves", "bits", "mse"}] * 12
        leaves = [r["leaves"] for r in rows]
        mses = [r["mse"] for r in rows]
        assert all(a >= b for a, b in zip(leaves, leaves[1:]))  # pricier, coarser
        assert all(a <= b for a, b in zip(mses, mses[1:]))  # coarser, worse
        for row in rows:
            assert row["bits"] == 2 * row["leaves"] - 1 + 8 * row["leaves"]
