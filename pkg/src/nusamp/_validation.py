"""Input validation helpers used by the estimators and module functions."""

from __future__ import annotations

import numpy as np


def check_signal_values(x, min_length: int = 2) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array of at least ``min_length`` samples.

    Column vectors of shape (n, 1) are accepted and squeezed, so the
    estimators interoperate with matrix-shaped pipeline stages.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D signal, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"signal needs at least {min_length} samples, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains non-finite values")
    return arr


def check_density(values, *, rtol: float = 1e-9) -> np.ndarray:
    """Validate a sampling-point density on the uniform grid.

    Entries must be nonnegative and the Riemann sum over the unit interval
    must equal 1 within ``rtol``.
    """
    dens = np.asarray(values, dtype=np.float64)
    if dens.ndim != 1 or dens.size == 0:
        raise ValueError("density must be a non-empty 1-D array")
    if np.any(dens < 0) or not np.all(np.isfinite(dens)):
        raise ValueError("density entries must be finite and nonnegative")
    total = dens.sum() / dens.size
    if abs(total - 1.0) > rtol:
        raise ValueError(f"density does not integrate to 1 (got {total!r})")
    return dens


def check_probability(values, *, rtol: float = 1e-9) -> np.ndarray:
    """Validate a pdf sampled on a uniform grid over its support.

    The grid cell width is implied by the support elsewhere; here only
    nonnegativity and finiteness are checked, normalization is the caller's
    job because it depends on the support width.
    """
    p = np.asarray(values, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("pdf must be a non-empty 1-D array")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("pdf entries must be finite and nonnegative")
    return p


def check_segment_count(n: int, n_grid: int) -> int:
    from .errors import ResolutionError

    n = int(n)
    if n < 1:
        raise ValueError(f"segment count must be >= 1, got {n}")
    if n > n_grid:
        raise ResolutionError(f"segment count {n} exceeds grid resolution {n_grid}")
    return n
