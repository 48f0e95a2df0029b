"""Sampling-point densities, companding curves and nonuniform segmentations.

The local slope energy of the signal decides where sample boundaries should
concentrate: the MSE-optimal density is proportional to the cube root of the
squared derivative. Segmentations are realized either by inverting the
cumulative density (compressor/expander companding) or by sweeping the grid
and cutting whenever the accumulated cube-root mass reaches a per-segment
quota. Both routes place boundaries on the discrete grid so that their
positions can later be coded losslessly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._validation import check_density, check_segment_count
from .errors import DegenerateSignalError

__all__ = [
    "DERIVATIVE_ENERGY_FLOOR",
    "Segmentation",
    "ThresholdResult",
    "cube_root_mass",
    "optimal_density",
    "compressor",
    "segment_by_expander",
    "segment_by_threshold",
    "uniform_segmentation",
    "segmentation_to_csv",
    "density_to_csv",
]

# Floor applied to the squared derivative so the density stays strictly
# positive over flat stretches; smallest double-precision spacing at 1.0.
DERIVATIVE_ENERGY_FLOOR = 2.0**-52

_CBRT_EXP = 1.0 / 3.0


@dataclass(frozen=True)
class Segmentation:
    """Strictly increasing grid indices ``0 = b_0 < ... < b_N = n_grid``."""

    boundaries: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=np.int64)
        if b.ndim != 1 or b.size < 2:
            raise ValueError("segmentation needs at least two boundaries")
        if b[0] != 0:
            raise ValueError("segmentation must start at grid index 0")
        if np.any(np.diff(b) <= 0):
            raise ValueError("segmentation boundaries must be strictly increasing")
        b.flags.writeable = False
        object.__setattr__(self, "boundaries", b)

    @property
    def n_segments(self) -> int:
        return self.boundaries.size - 1

    @property
    def n_grid(self) -> int:
        return int(self.boundaries[-1])

    def lengths(self) -> np.ndarray:
        """Segment widths in grid cells."""
        return np.diff(self.boundaries)

    def times(self) -> np.ndarray:
        """Boundary positions as times in [0, 1]."""
        return self.boundaries / self.n_grid


@dataclass(frozen=True)
class ThresholdResult:
    """Sequential-threshold segmentation plus the per-segment mass quota."""

    segmentation: Segmentation
    segment_mass: float

    def __post_init__(self):
        if not self.segment_mass > 0:
            raise ValueError("segment mass quota must be positive")


def cube_root_mass(deriv: np.ndarray) -> np.ndarray:
    """Per-cell contribution ``|slope|^(2/3) * cell_width`` to the cube-root energy."""
    d = np.asarray(deriv, dtype=np.float64)
    return np.power(d * d, _CBRT_EXP) / d.size


def optimal_density(deriv: np.ndarray, eps: float = DERIVATIVE_ENERGY_FLOOR) -> np.ndarray:
    """MSE-optimal sampling-point density for a given derivative grid.

    Each entry is proportional to ``max(slope^2, eps) ** (1/3)`` and the
    result integrates to exactly 1 over [0, 1). The floor ``eps`` keeps the
    density invertible where the signal is flat.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    d = np.asarray(deriv, dtype=np.float64)
    w = np.power(np.maximum(d * d, eps), _CBRT_EXP)
    return w / (w.sum() * (1.0 / d.size))


def compressor(density: np.ndarray) -> np.ndarray:
    """Cumulative of the density: the monotone map sent to a uniform divider.

    Returns ``n_grid + 1`` knots with ``u[0] == 0`` and ``u[-1] == 1``
    exactly; interior knots are the left-Riemann partial integrals.
    """
    dens = check_density(density)
    u = np.concatenate(([0.0], np.cumsum(dens) / dens.size))
    u = np.minimum(u, 1.0)
    u[-1] = 1.0
    return u


def segment_by_expander(curve: np.ndarray, n: int) -> Segmentation:
    """Invert the compressor at ``n`` equally spaced levels.

    Boundary ``i`` is the smallest grid index whose compressor value reaches
    ``i / n``. Duplicate indices (possible when the density piles mass into
    single cells) are removed, so the effective segment count can come out
    lower than requested; callers see this in the boundary count.
    """
    u = np.asarray(curve, dtype=np.float64)
    n_grid = u.size - 1
    n = check_segment_count(n, n_grid)
    targets = np.arange(1, n) / n
    inner = np.searchsorted(u, targets, side="left")
    boundaries = np.unique(np.concatenate(([0], inner, [n_grid])))
    return Segmentation(boundaries)


def segment_by_threshold(deriv: np.ndarray, n: int) -> ThresholdResult:
    """Cut the grid wherever the running cube-root-energy mass fills a quota.

    The quota is ``total mass / n``. The sweep never splits a grid cell: a
    boundary lands on the first index at which the accumulated mass reaches
    the next multiple of the quota, so each segment's mass stays within one
    cell's contribution of the quota (the overshoot of one cut is carried
    into the next, it does not pile up). The final boundary is forced to the
    grid end; if rounding exhausts the mass early the trailing boundaries
    collapse there and are deduplicated.
    """
    d = np.asarray(deriv, dtype=np.float64)
    n = check_segment_count(n, d.size)
    if not np.any(d):
        raise DegenerateSignalError("derivative is identically zero; segmentation is undefined")
    mass = cube_root_mass(d)
    cum = np.concatenate(([0.0], np.cumsum(mass)))
    quota = cum[-1] / n
    targets = quota * np.arange(1, n)
    inner = np.searchsorted(cum, targets, side="left")
    boundaries = np.unique(np.concatenate(([0], np.minimum(inner, d.size), [d.size])))
    return ThresholdResult(Segmentation(boundaries), float(quota))


def uniform_segmentation(n_grid: int, n: int) -> Segmentation:
    """Equal-width segmentation; boundary ``i`` is ``round(i * n_grid / n)``."""
    n_grid = int(n_grid)
    n = check_segment_count(n, n_grid)
    boundaries = np.floor(np.arange(n + 1) * n_grid / n + 0.5).astype(np.int64)
    return Segmentation(boundaries)


def segmentation_to_csv(seg: Segmentation, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["boundary_index"])
        for b in seg.boundaries:
            writer.writerow([int(b)])


def density_to_csv(density: np.ndarray, path) -> None:
    """Write (t, density) pairs for plotting."""
    dens = np.asarray(density, dtype=np.float64)
    t = np.arange(dens.size) / dens.size
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "density"])
        for tk, dk in zip(t, dens):
            writer.writerow([repr(float(tk)), repr(float(dk))])
