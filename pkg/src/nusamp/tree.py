"""Tree-structured adaptive sampling: the competing baseline.

A full binary tree of a chosen depth tiles [0, 1) with equal dyadic leaves.
Sibling leaves are merged bottom-up whenever their combined error-plus-price
exceeds the parent's, with the price per leaf acting as the rate knob: a
higher price buys fewer, wider segments. The pruned leaves induce a
piecewise-constant approximation and a simple coded size (one structure bit
per node plus a fixed budget per leaf sample).
"""

from __future__ import annotations

import numpy as np

from .sampling import PiecewiseConstant, empirical_mse
from .segmentation import Segmentation
from .signals import UniformSignal

__all__ = [
    "DyadicTree",
    "build_full_tree",
    "prune",
    "tree_sample",
    "tree_rate_bits",
    "rate_distortion_sweep",
]


class DyadicTree:
    """Binary tree over dyadic intervals with per-node means and errors.

    Nodes are stored level by level: level ``h`` holds ``2**h`` nodes, node
    ``i`` covering grid cells ``[i * n_grid / 2**h, (i+1) * n_grid / 2**h)``.
    ``errors[h][i]`` is the integral of the squared deviation from the node
    mean (time units, i.e. already scaled by the cell width). ``leaf_mask``
    marks the current leaf front; in a freshly built tree every deepest node
    is a leaf. Trees are treated as immutable: pruning returns a new tree
    sharing the error and mean arrays.
    """

    def __init__(self, n_grid, depth, means, errors, leaf_mask):
        self.n_grid = n_grid
        self.depth = depth
        self.means = means
        self.errors = errors
        self.leaf_mask = leaf_mask

    def leaf_count(self) -> int:
        return int(sum(mask.sum() for mask in self.leaf_mask))

    def leaf_intervals(self) -> list[tuple[int, int, float, float]]:
        """Leaves in left-to-right order as (left, right, mean, error)."""
        out = []
        for h, mask in enumerate(self.leaf_mask):
            width = self.n_grid >> h
            for i in np.flatnonzero(mask):
                left = int(i) * width
                out.append((left, left + width, float(self.means[h][i]), float(self.errors[h][i])))
        out.sort()
        return out

    def segmentation(self) -> Segmentation:
        lefts = [iv[0] for iv in self.leaf_intervals()]
        return Segmentation(np.asarray(lefts + [self.n_grid], dtype=np.int64))

    def root_error(self) -> float:
        return float(self.errors[0][0])


def build_full_tree(signal: UniformSignal, depth: int) -> DyadicTree:
    """Build the complete tree, computing every node's mean and squared error."""
    depth = int(depth)
    n_grid = signal.n_grid
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if (1 << depth) > n_grid or n_grid % (1 << depth):
        raise ValueError(
            f"grid of {n_grid} cells cannot host a depth-{depth} dyadic tree"
        )
    x = signal.values
    sum1 = np.concatenate(([0.0], np.cumsum(x)))
    sum2 = np.concatenate(([0.0], np.cumsum(x * x)))
    means, errors, leaf_mask = [], [], []
    for h in range(depth + 1):
        width = n_grid >> h
        lo = np.arange(1 << h, dtype=np.int64) * width
        hi = lo + width
        seg_sum = sum1[hi] - sum1[lo]
        seg_sq = sum2[hi] - sum2[lo]
        means.append(seg_sum / width)
        errors.append((seg_sq - seg_sum * seg_sum / width) / n_grid)
        leaf_mask.append(np.zeros(1 << h, dtype=bool))
    leaf_mask[depth][:] = True
    return DyadicTree(n_grid, depth, means, errors, leaf_mask)


def prune(tree: DyadicTree, leaf_cost: float) -> DyadicTree:
    """Merge sibling leaves whose combined priced cost exceeds their parent's.

    ``leaf_cost`` is the price added to every leaf's squared error. The sweep
    runs bottom-up, one level per pass, merging a sibling pair exactly when
    keeping them is strictly more expensive than the merged parent; it stops
    at the first level where nothing merges, or at the root. Every merge
    strictly lowers the total priced cost.
    """
    if leaf_cost < 0:
        raise ValueError(f"leaf cost must be nonnegative, got {leaf_cost}")
    leaf_mask = [mask.copy() for mask in tree.leaf_mask]
    for h in range(tree.depth, 0, -1):
        mask = leaf_mask[h]
        pair_is_leaves = mask[0::2] & mask[1::2]
        children_cost = tree.errors[h][0::2] + tree.errors[h][1::2] + 2.0 * leaf_cost
        parent_cost = tree.errors[h - 1] + leaf_cost
        merge = pair_is_leaves & (children_cost > parent_cost)
        if not merge.any():
            break
        mask[np.repeat(merge, 2)] = False
        leaf_mask[h - 1][merge] = True
    return DyadicTree(tree.n_grid, tree.depth, tree.means, tree.errors, leaf_mask)


def tree_sample(tree: DyadicTree) -> PiecewiseConstant:
    """Piecewise-constant approximation induced by the current leaves."""
    leaves = tree.leaf_intervals()
    boundaries = np.asarray([iv[0] for iv in leaves] + [tree.n_grid], dtype=np.int64)
    samples = np.asarray([iv[2] for iv in leaves])
    return PiecewiseConstant(Segmentation(boundaries), samples)


def tree_rate_bits(tree: DyadicTree, bits_per_sample: int) -> int:
    """Coded size: preorder structure bits (internal=1, leaf=0) plus sample bits.

    A pruned binary tree with L leaves has 2L - 1 nodes, hence 2L - 1
    structure bits.
    """
    leaves = tree.leaf_count()
    return (2 * leaves - 1) + leaves * int(bits_per_sample)


def rate_distortion_sweep(
    signal: UniformSignal, depth: int, mu_grid, bits_per_sample: int = 8
) -> list[dict]:
    """Rate/distortion rows (mu, leaves, bits, mse) across a leaf-price grid."""
    full = build_full_tree(signal, depth)
    rows = []
    for mu in mu_grid:
        pruned = prune(full, float(mu))
        rows.append(
            {
                "mu": float(mu),
                "leaves": pruned.leaf_count(),
                "bits": tree_rate_bits(pruned, bits_per_sample),
                "mse": empirical_mse(signal, tree_sample(pruned)),
            }
        )
    return rows
