"""Transforms between the sampling problem and high-rate quantizer design.

A signal's normalized squared derivative is a valid pdf, so sampling errors
map onto quantization errors of that pdf (up to the total derivative energy).
Conversely, integrating the square root of a pdf manufactures a monotone
signal whose optimal segmentation, pushed through an affine change of
coordinates, is an optimal quantizer partition for the pdf. Both directions
are implemented on the shared uniform grid.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._validation import check_probability
from .errors import DegenerateSignalError
from .segmentation import (
    DERIVATIVE_ENERGY_FLOOR,
    compressor,
    optimal_density,
    segment_by_expander,
)
from .signals import UniformSignal, derivative

__all__ = [
    "PdfGrid",
    "QuantizerSpec",
    "pdf_from_signal",
    "signal_from_pdf",
    "design_quantizer_via_sampling",
    "quantizer_bennett_mse",
    "quantizer_to_csv",
]


@dataclass(frozen=True)
class PdfGrid:
    """A pdf sampled on a uniform grid over the half-open support interval.

    ``derivative_energy`` is populated when the pdf was derived from a
    signal, recording the normalizer needed by the error bridge.
    """

    values: np.ndarray
    support: tuple[float, float]
    derivative_energy: float | None = None

    def __post_init__(self):
        values = check_probability(self.values)
        lo, hi = float(self.support[0]), float(self.support[1])
        if not lo < hi:
            raise ValueError("pdf support is empty")
        total = values.sum() * (hi - lo) / values.size
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"pdf does not integrate to 1 (got {total!r})")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "support", (lo, hi))

    @property
    def n_grid(self) -> int:
        return self.values.size

    @property
    def cell_width(self) -> float:
        lo, hi = self.support
        return (hi - lo) / self.values.size

    def grid(self) -> np.ndarray:
        """Left edge of every pdf cell, in support coordinates."""
        lo, hi = self.support
        return lo + np.arange(self.values.size) * (hi - lo) / self.values.size


@dataclass(frozen=True)
class QuantizerSpec:
    """Scalar quantizer: cell boundaries plus one reproduction value per cell."""

    boundaries: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=np.float64)
        p = np.asarray(self.points, dtype=np.float64)
        if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0):
            raise ValueError("quantizer boundaries must be strictly increasing")
        if p.size != b.size - 1:
            raise ValueError("need one reproduction point per quantizer cell")
        b.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "points", p)

    @property
    def n_cells(self) -> int:
        return self.points.size


def pdf_from_signal(signal: UniformSignal) -> PdfGrid:
    """Normalize the squared derivative into a pdf on [0, 1).

    The total derivative energy used for normalization rides along on the
    result, since the sampling/quantization error bridge needs it.
    """
    d = derivative(signal)
    energy = float(np.sum(d * d) / d.size)
    if energy == 0.0:
        raise DegenerateSignalError("constant signal induces no pdf")
    return PdfGrid(d * d / energy, (0.0, 1.0), derivative_energy=energy)


def signal_from_pdf(pdf: PdfGrid) -> UniformSignal:
    """Build the monotone signal whose squared slope reproduces the pdf.

    The amplitude at ``t`` is the integral of ``sqrt(pdf)`` up to the point a
    fraction ``t`` of the way through the support, scaled by the support
    width; taking the positive square root makes the result non-decreasing.
    """
    root = np.sqrt(pdf.values)
    # cumulative of sqrt(p) * dx, divided by the support width; with
    # dx = width / n this collapses to cumsum(root) / n.
    values = np.concatenate(([0.0], np.cumsum(root[:-1]))) / pdf.n_grid
    return UniformSignal.from_values(values)


def design_quantizer_via_sampling(
    pdf: PdfGrid, n: int, eps: float = DERIVATIVE_ENERGY_FLOOR
) -> QuantizerSpec:
    """Design an n-cell quantizer by segmenting the pdf's companion signal.

    The companion signal is segmented with the usual cube-root density and
    expander; boundaries map back through the affine coordinate change onto
    the pdf's support. Reproduction points are the pdf-conditional means of
    each cell (the optimal-representative principle); a cell carrying no
    probability mass falls back to its midpoint.
    """
    companion = signal_from_pdf(pdf)
    density = optimal_density(derivative(companion), eps)
    seg = segment_by_expander(compressor(density), n)
    lo, hi = pdf.support
    boundaries = lo + seg.boundaries / pdf.n_grid * (hi - lo)

    x = pdf.grid()
    points = np.empty(seg.n_segments)
    b = seg.boundaries
    for i in range(seg.n_segments):
        cell_p = pdf.values[b[i] : b[i + 1]]
        cell_x = x[b[i] : b[i + 1]]
        mass = cell_p.sum()
        if mass > 0:
            points[i] = float(cell_p @ cell_x / mass)
        else:
            points[i] = float((boundaries[i] + boundaries[i + 1]) / 2.0)
    return QuantizerSpec(boundaries, points)


def quantizer_bennett_mse(pdf: PdfGrid, density: np.ndarray, n: int) -> float:
    """High-rate quantizer MSE for a reproduction-point density.

    ``(1 / (12 n^2)) * sum(pdf / density^2) * cell_width`` over the support,
    the quantization-side twin of the sampling error integral.
    """
    p = pdf.values
    dens = np.asarray(density, dtype=np.float64)
    if dens.shape != p.shape:
        raise ValueError("density grid must match the pdf grid")
    zero = dens == 0.0
    if np.any(zero & (p != 0.0)):
        raise ZeroDivisionError("density vanishes where the pdf is positive")
    ratio = np.zeros_like(p)
    np.divide(p, dens * dens, out=ratio, where=~zero)
    return float(ratio.sum() * pdf.cell_width / (12.0 * n * n))


def quantizer_to_csv(spec: QuantizerSpec, path) -> None:
    """Write (boundary, reproduction) rows; boundaries are each cell's left edge."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["boundary", "reproduction"])
        for left, point in zip(spec.boundaries[:-1], spec.points):
            writer.writerow([repr(float(left)), repr(float(point))])
