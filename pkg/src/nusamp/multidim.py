"""Theoretic evaluator for sampling signals over the K-dimensional unit cube.

No multidimensional sampler is constructed (companding does not generalize);
instead, given a gradient-energy field this module evaluates the optimal
sampling-point density, the density-driven error integral, and the matching
lower bound. Setting K = 1 reproduces the one-dimensional formulas exactly,
with the normalized-interval inertia constant 1/12.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .segmentation import DERIVATIVE_ENERGY_FLOOR

__all__ = [
    "INTERVAL_INERTIA",
    "GradientField",
    "optimal_density_kd",
    "bennett_mse_kd",
    "mse_lower_bound_kd",
    "gradient_field_from_csv",
    "gradient_field_to_csv",
]

# Normalized moment of inertia of an interval (or any cube) about its center.
INTERVAL_INERTIA = 1.0 / 12.0


@dataclass(frozen=True)
class GradientField:
    """Squared gradient norms sampled on a rectangular grid over the unit cube."""

    energy: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.energy, dtype=np.float64)
        if arr.ndim < 1 or arr.size == 0:
            raise ValueError("gradient field must be a non-empty array")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("gradient energies must be finite and nonnegative")
        arr.flags.writeable = False
        object.__setattr__(self, "energy", arr)

    @property
    def ndim(self) -> int:
        return self.energy.ndim

    @property
    def cell_volume(self) -> float:
        return float(np.prod([1.0 / s for s in self.energy.shape]))


def optimal_density_kd(field: GradientField, eps: float = DERIVATIVE_ENERGY_FLOOR) -> np.ndarray:
    """Optimal sampling-point density: energy to the power K/(K+2), normalized."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    k = field.ndim
    w = np.power(np.maximum(field.energy, eps), k / (k + 2.0))
    return w / (w.sum() * field.cell_volume)


def bennett_mse_kd(field: GradientField, density: np.ndarray, m, n: int) -> float:
    """Density-driven error integral for K-dimensional sampling.

    ``(K / n^(2/K)) * sum(energy * m / density^(2/K)) * cell_volume`` where
    ``m`` is the inertial profile: either a scalar (constant profile, the
    optimal-tessellation assumption) or a per-cell array.
    """
    k = field.ndim
    dens = np.asarray(density, dtype=np.float64)
    if dens.shape != field.energy.shape:
        raise ValueError("density grid must match the gradient field")
    profile = np.broadcast_to(np.asarray(m, dtype=np.float64), dens.shape)
    zero = dens == 0.0
    if np.any(zero & (field.energy != 0.0)):
        raise ZeroDivisionError("density vanishes where the gradient energy is nonzero")
    integrand = np.zeros_like(dens)
    np.divide(
        field.energy * profile,
        np.power(dens, 2.0 / k),
        out=integrand,
        where=~zero,
    )
    return float(k / n ** (2.0 / k) * integrand.sum() * field.cell_volume)


def mse_lower_bound_kd(field: GradientField, n: int, inertia: float) -> float:
    """Lower bound on the sampling MSE attainable by any valid density.

    ``(K * inertia / n^(2/K)) * (sum energy^(K/(K+2)) * cell_volume) ** ((K+2)/K)``;
    equality holds at the optimal density with a constant inertial profile.
    """
    if not inertia > 0:
        raise ValueError(f"inertia constant must be positive, got {inertia}")
    k = field.ndim
    mass = np.power(field.energy, k / (k + 2.0)).sum() * field.cell_volume
    return float(k * inertia / n ** (2.0 / k) * mass ** ((k + 2.0) / k))


def gradient_field_from_csv(path) -> GradientField:
    """Read a field stored flat in row-major order behind a shape header line."""
    lines = [line.strip() for line in Path(path).read_text().splitlines() if line.strip()]
    if not lines or not lines[0].startswith("shape"):
        raise ValueError(f"{path}: expected a leading 'shape,<d1>,<d2>,...' line")
    shape = tuple(int(tok) for tok in lines[0].split(",")[1:] if tok.strip())
    if not shape:
        raise ValueError(f"{path}: shape header carries no dimensions")
    values = np.array([float(line.split(",")[0]) for line in lines[1:]])
    if values.size != int(np.prod(shape)):
        raise ValueError(
            f"{path}: {values.size} values cannot fill shape {shape}"
        )
    return GradientField(values.reshape(shape))


def gradient_field_to_csv(field: GradientField, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["shape", *field.energy.shape])
        for value in field.energy.ravel(order="C"):
            writer.writerow([repr(float(value))])
