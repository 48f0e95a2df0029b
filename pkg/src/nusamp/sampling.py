"""Piecewise-constant sampling and its error measures.

Three views of the same MSE: the empirical error of an actual piecewise
approximation, the high-resolution integral that predicts the error of any
density (a Bennett-style integral driven by derivative energy), and its
minimized closed form (the Panter-Dite-style optimum). All three use the
identical left-Riemann quadrature so their comparisons share discretization
bias.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .segmentation import Segmentation, cube_root_mass
from .signals import UniformSignal

__all__ = [
    "PiecewiseConstant",
    "optimal_samples",
    "empirical_mse",
    "bennett_mse",
    "panter_dite_mse",
    "mse_sweep_to_csv",
]


@dataclass(frozen=True)
class PiecewiseConstant:
    """A segmentation with one representative amplitude per segment."""

    segmentation: Segmentation
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 1 or s.size != self.segmentation.n_segments:
            raise ValueError("need exactly one sample per segment")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def n_segments(self) -> int:
        return self.samples.size

    def to_dense(self) -> np.ndarray:
        """Expand back onto the dense grid."""
        return np.repeat(self.samples, self.segmentation.lengths())


def optimal_samples(signal: UniformSignal, seg: Segmentation) -> PiecewiseConstant:
    """Represent each segment by its mean amplitude (the MSE-optimal choice)."""
    if seg.n_grid != signal.n_grid:
        raise ValueError(
            f"segmentation covers {seg.n_grid} cells but signal has {signal.n_grid}"
        )
    b = seg.boundaries
    sums = np.add.reduceat(signal.values, b[:-1])
    return PiecewiseConstant(seg, sums / seg.lengths())


def empirical_mse(signal: UniformSignal, pc: PiecewiseConstant) -> float:
    """Mean squared error of a piecewise-constant approximation on the grid."""
    if pc.segmentation.n_grid != signal.n_grid:
        raise ValueError("piecewise approximation and signal use different grids")
    return float(np.mean((signal.values - pc.to_dense()) ** 2))


def bennett_mse(deriv: np.ndarray, density: np.ndarray, n: int) -> float:
    """High-resolution MSE predicted for sampling with a given point density.

    Evaluates ``(1 / (12 n^2)) * sum(slope^2 / density^2) * cell_width``.
    Cells where both the slope and the density vanish contribute nothing;
    a vanishing density against a nonzero slope is an error.
    """
    d = np.asarray(deriv, dtype=np.float64)
    dens = np.asarray(density, dtype=np.float64)
    if d.shape != dens.shape:
        raise ValueError("derivative and density grids must match")
    zero = dens == 0.0
    if np.any(zero & (d != 0.0)):
        raise ZeroDivisionError("density vanishes where the derivative is nonzero")
    ratio = np.zeros_like(d)
    np.divide(d, dens, out=ratio, where=~zero)
    return float(np.sum(ratio * ratio) / d.size / (12.0 * n * n))


def panter_dite_mse(deriv: np.ndarray, n: int) -> float:
    """Minimum of the density-driven MSE over all valid densities.

    ``(1 / (12 n^2)) * (sum |slope|^(2/3) * cell_width) ** 3`` — attained by
    the cube-root-optimal density.
    """
    if n < 1:
        raise ValueError(f"segment count must be >= 1, got {n}")
    total = cube_root_mass(np.asarray(deriv, dtype=np.float64)).sum()
    return float(total**3 / (12.0 * n * n))


def mse_sweep_to_csv(rows: list[dict], path) -> None:
    """Write benchmark sweep rows with a stable column order."""
    if not rows:
        raise ValueError("no sweep rows to write")
    columns = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] if isinstance(row[c], int) else repr(float(row[c])) for c in columns])
