"""Scikit-learn style estimators wrapping the resampling pipelines.

Both estimators treat a dense 1-D signal as the data: ``fit`` learns a
segmentation of the grid from the training signal, ``transform`` projects a
signal of the same length onto that segmentation (per-segment means expanded
back to the dense grid), and ``score`` returns the negative mean squared
error, so that larger is better in model-selection loops.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_signal_values
from .sampling import empirical_mse, optimal_samples
from .segmentation import (
    DERIVATIVE_ENERGY_FLOOR,
    compressor,
    optimal_density,
    segment_by_expander,
    segment_by_threshold,
    uniform_segmentation,
)
from .signals import UniformSignal, derivative
from .tree import build_full_tree, prune

__all__ = ["NonuniformResampler", "TreeResampler"]


class NonuniformResampler(TransformerMixin, BaseEstimator):
    """Adaptive piecewise-constant resampler driven by derivative energy.

    Parameters
    ----------
    n_segments : int, default=50
        Number of segments to target. Degenerate inputs can merge
        boundaries, in which case ``segmentation_`` reports fewer.
    method : {"threshold", "expander", "uniform"}, default="threshold"
        How boundaries are placed: sequential mass thresholding, inversion
        of the cumulative density, or equal widths.
    energy_floor : float, default=2**-52
        Floor on the squared derivative keeping the density positive on
        flat stretches (expander method only).

    Attributes
    ----------
    segmentation_ : Segmentation
        Grid indices of the fitted boundaries.
    density_ : ndarray
        Sampling-point density of the training signal.
    segment_mass_ : float or None
        Per-segment cube-root-energy quota (threshold method only).
    n_features_in_ : int
        Length of the training signal.
    """

    def __init__(self, n_segments=50, method="threshold", energy_floor=DERIVATIVE_ENERGY_FLOOR):
        self.n_segments = n_segments
        self.method = method
        self.energy_floor = energy_floor

    def fit(self, X, y=None):
        x = check_signal_values(X)
        signal = UniformSignal.from_values(x)
        d = derivative(signal)
        self.density_ = optimal_density(d, self.energy_floor)
        self.segment_mass_ = None
        if self.method == "threshold":
            result = segment_by_threshold(d, self.n_segments)
            self.segmentation_ = result.segmentation
            self.segment_mass_ = result.segment_mass
        elif self.method == "expander":
            self.segmentation_ = segment_by_expander(compressor(self.density_), self.n_segments)
        elif self.method == "uniform":
            self.segmentation_ = uniform_segmentation(signal.n_grid, self.n_segments)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.n_features_in_ = x.size
        return self

    def transform(self, X):
        check_is_fitted(self, "segmentation_")
        x = self._check_same_grid(X)
        return optimal_samples(UniformSignal.from_values(x), self.segmentation_).to_dense()

    def score(self, X, y=None):
        check_is_fitted(self, "segmentation_")
        x = self._check_same_grid(X)
        signal = UniformSignal.from_values(x)
        return -empirical_mse(signal, optimal_samples(signal, self.segmentation_))

    def _check_same_grid(self, X) -> np.ndarray:
        x = check_signal_values(X)
        if x.size != self.n_features_in_:
            raise ValueError(
                f"signal has {x.size} samples but the fitted grid has {self.n_features_in_}"
            )
        return x


class TreeResampler(TransformerMixin, BaseEstimator):
    """Dyadic-tree piecewise-constant resampler with priced-leaf pruning.

    Parameters
    ----------
    depth : int, default=8
        Depth of the initial full tree; the signal length must be divisible
        by ``2**depth``.
    leaf_cost : float, default=0.0
        Price added to each leaf's error during pruning. Zero keeps the
        full tree; larger values buy coarser segmentations.

    Attributes
    ----------
    tree_ : DyadicTree
        The pruned tree fitted to the training signal.
    segmentation_ : Segmentation
        Boundaries induced by the pruned leaves.
    n_features_in_ : int
    """

    def __init__(self, depth=8, leaf_cost=0.0):
        self.depth = depth
        self.leaf_cost = leaf_cost

    def fit(self, X, y=None):
        x = check_signal_values(X)
        signal = UniformSignal.from_values(x)
        self.tree_ = prune(build_full_tree(signal, self.depth), self.leaf_cost)
        self.segmentation_ = self.tree_.segmentation()
        self.n_features_in_ = x.size
        return self

    def transform(self, X):
        check_is_fitted(self, "tree_")
        x = check_signal_values(X)
        if x.size != self.n_features_in_:
            raise ValueError(
                f"signal has {x.size} samples but the fitted grid has {self.n_features_in_}"
            )
        return optimal_samples(UniformSignal.from_values(x), self.segmentation_).to_dense()

    def score(self, X, y=None):
        check_is_fitted(self, "tree_")
        x = check_signal_values(X)
        signal = UniformSignal.from_values(x)
        return -empirical_mse(signal, optimal_samples(signal, self.segmentation_))
