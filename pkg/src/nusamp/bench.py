"""Benchmark harness: sampling and coding sweeps shared by the CLI.

Sample budgets are not chosen directly: a logarithmic grid of leaf prices
drives the tree pruner, and the distinct leaf counts it produces become the
budgets for every method. That keeps the comparison between the adaptive,
uniform and tree-structured samplers aligned on identical budgets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codec import CodecConfig, decode_descriptor, encode_descriptor
from .reconstruction import describe, reconstruct
from .sampling import empirical_mse, optimal_samples, panter_dite_mse
from .segmentation import segment_by_threshold, uniform_segmentation
from .signals import UniformSignal, derivative
from .tree import DyadicTree, build_full_tree, prune, tree_rate_bits, tree_sample

__all__ = ["BenchConfig", "default_mu_grid", "bench_sampling", "bench_codec"]

TREE_SAMPLE_BITS = 8


@dataclass(frozen=True)
class BenchConfig:
    """Sweep settings: tree depth, leaf-price grid, and codec parameters.

    The default depth keeps at least ~32 grid cells per segment on a 2^16
    grid; much finer budgets leave the descriptor reconstruction too little
    width resolution for its slope inference to stay stable.
    """

    depth: int = 11
    mu_grid: np.ndarray | None = None
    codec: CodecConfig = field(default_factory=CodecConfig)


def default_mu_grid(tree: DyadicTree, points: int = 64) -> np.ndarray:
    """Log-spaced leaf prices spanning leaf counts from the full tree to 1.

    Any price above the root error collapses the tree outright (no merge can
    cost more than the root's own error), so the grid tops out just above
    it; the bottom is small enough to keep the full tree.
    """
    top = max(tree.root_error() * 1.05, 1e-300)
    bottom = max(top * 1e-12, 1e-300)
    return np.logspace(np.log10(bottom), np.log10(top), points)


def _budgets(signal: UniformSignal, cfg: BenchConfig):
    """Prune across the price grid; return {leaf count: best pruned tree}."""
    full = build_full_tree(signal, cfg.depth)
    grid = cfg.mu_grid if cfg.mu_grid is not None else default_mu_grid(full)
    if len(grid) == 0:
        raise ValueError("the leaf-price grid is empty")
    picks: dict[int, DyadicTree] = {}
    for mu in grid:
        pruned = prune(full, float(mu))
        picks.setdefault(pruned.leaf_count(), pruned)
    return picks


def bench_sampling(signal: UniformSignal, cfg: BenchConfig | None = None) -> list[dict]:
    """Per-budget MSE of adaptive, uniform and tree sampling (raw and normalized)."""
    cfg = cfg or BenchConfig()
    d = derivative(signal)
    energy = float(np.mean(signal.values**2))
    rows = []
    for n, tree in sorted(_budgets(signal, cfg).items()):
        seg = segment_by_threshold(d, n).segmentation
        mse_opt = empirical_mse(signal, optimal_samples(signal, seg))
        mse_uni = empirical_mse(
            signal, optimal_samples(signal, uniform_segmentation(signal.n_grid, n))
        )
        mse_tree = empirical_mse(signal, tree_sample(tree))
        rows.append(
            {
                "n": n,
                "mse_opt_empirical": mse_opt,
                "mse_opt_theory": panter_dite_mse(d, n),
                "mse_uniform": mse_uni,
                "mse_tree": mse_tree,
                "mse_opt_empirical_norm": mse_opt / energy,
                "mse_uniform_norm": mse_uni / energy,
                "mse_tree_norm": mse_tree / energy,
            }
        )
    return rows


def bench_codec(signal: UniformSignal, cfg: BenchConfig | None = None) -> list[dict]:
    """Rate/distortion of the descriptor codec against the coded tree sampler.

    The tree side quantizes its leaf samples to 8 bits over the codec's
    amplitude range and pays one structure bit per node; the descriptor side
    encodes, decodes and reconstructs, so its distortion includes every
    coding loss.
    """
    cfg = cfg or BenchConfig()
    n_grid = signal.n_grid
    rows = []
    for n, tree in sorted(_budgets(signal, cfg).items()):
        pc_tree = tree_sample(tree)
        quantized = np.array(
            [
                _requantize(v, TREE_SAMPLE_BITS, cfg.codec.amp_range)
                for v in pc_tree.samples
            ]
        )
        tree_mse = empirical_mse(
            signal, type(pc_tree)(pc_tree.segmentation, quantized)
        )
        tree_bits = tree_rate_bits(tree, TREE_SAMPLE_BITS)

        stream = encode_descriptor(describe(signal, n), cfg.codec)
        decoded, _ = decode_descriptor(stream, cfg.codec)
        codec_mse = empirical_mse(signal, reconstruct(decoded))
        codec_bits = len(stream) * 8
        rows.append(
            {
                "n": n,
                "tree_bits": tree_bits,
                "tree_bpp": tree_bits / n_grid,
                "tree_mse": tree_mse,
                "codec_bits": codec_bits,
                "codec_bpp": codec_bits / n_grid,
                "codec_mse": codec_mse,
            }
        )
    return rows


def _requantize(value: float, bits: int, amp_range: tuple[float, float]) -> float:
    from .codec import dequantize_uniform, quantize_uniform

    return dequantize_uniform(quantize_uniform(value, bits, amp_range), bits, amp_range)
