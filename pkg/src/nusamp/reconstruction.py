"""Descriptor-based sampling and sequential reconstruction.

The sampler emits only a compact descriptor: segmentation times, the interior
extrema (times and amplitudes), the sign of the initial slope, the starting
amplitude, and the per-segment cube-root-energy mass. Because every optimal
segment accumulates the same mass, a segment's width reveals the magnitude of
the local slope, so the per-segment representative values never need to be
transmitted.

Reconstruction walks the segments in order, carrying a running estimate of
the amplitude at the current boundary and the current monotonicity sign:

* a segment without extrema gets a linear estimate whose slope magnitude is
  inferred from the mass/width relation;
* a segment containing extrema is split at its first extremum and modeled by
  two quadratic arcs that meet there with zero slope — the left arc pins the
  entry amplitude, the right arc spends whatever mass the left arc did not
  consume; the monotonicity sign then flips once per extremum inside.

The piecewise-constant output takes each segment's representative value from
this estimate (midpoint value for linear segments, segment average for
quadratic ones).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSignalError
from .sampling import PiecewiseConstant
from .segmentation import Segmentation, segment_by_threshold
from .signals import ExtremaList, UniformSignal, derivative, find_extrema

__all__ = [
    "QuadCoeffs",
    "SamplerDescriptor",
    "describe",
    "infer_derivative",
    "fit_left_quadratic",
    "fit_right_quadratic",
    "reconstruct",
]

_CBRT_EXP = 1.0 / 3.0


class QuadCoeffs(NamedTuple):
    """Quadratic amplitude model ``c2*t^2 + c1*t + c0`` over time."""

    c2: float
    c1: float
    c0: float

    def value(self, t):
        return (self.c2 * t + self.c1) * t + self.c0

    def slope(self, t):
        return 2.0 * self.c2 * t + self.c1


@dataclass(frozen=True)
class SamplerDescriptor:
    """Everything the reconstruction needs: N + 2J + 2 real values plus the grid size."""

    boundaries: Segmentation
    extrema: ExtremaList
    slope_sign: int
    start_value: float
    segment_mass: float
    n_grid: int

    def __post_init__(self):
        if self.slope_sign not in (-1, 1):
            raise ValueError(f"slope sign must be +1 or -1, got {self.slope_sign}")
        if not self.segment_mass > 0:
            raise ValueError("segment mass must be positive")
        if self.boundaries.n_grid != self.n_grid:
            raise ValueError("segmentation does not cover the declared grid")
        ext = self.extrema
        if ext.count and (ext.indices[0] <= 0 or ext.indices[-1] >= self.n_grid):
            raise ValueError("extrema must lie strictly inside the grid")

    def payload_size(self) -> int:
        """Number of real values a transmitter must convey (grid size excluded)."""
        return self.boundaries.n_segments + 2 * self.extrema.count + 2

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_grid": self.n_grid,
                "boundaries": self.boundaries.boundaries.tolist(),
                "extrema": [
                    [int(i), float(v)]
                    for i, v in zip(self.extrema.indices, self.extrema.values)
                ],
                "slope_sign": int(self.slope_sign),
                "start_value": float(self.start_value),
                "segment_mass": float(self.segment_mass),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SamplerDescriptor":
        data = json.loads(text)
        ext = data["extrema"]
        return cls(
            boundaries=Segmentation(np.asarray(data["boundaries"], dtype=np.int64)),
            extrema=ExtremaList(
                np.asarray([e[0] for e in ext], dtype=np.int64),
                np.asarray([e[1] for e in ext], dtype=np.float64),
                int(data["n_grid"]),
            ),
            slope_sign=int(data["slope_sign"]),
            start_value=float(data["start_value"]),
            segment_mass=float(data["segment_mass"]),
            n_grid=int(data["n_grid"]),
        )


def describe(signal: UniformSignal, n: int) -> SamplerDescriptor:
    """Run the sampler: segment by threshold and collect the reconstruction payload."""
    d = derivative(signal)
    result = segment_by_threshold(d, n)
    nonzero = np.flatnonzero(np.diff(signal.values))
    if nonzero.size == 0:
        raise DegenerateSignalError("constant signal has no descriptor")
    slope_sign = 1 if signal.values[nonzero[0] + 1] > signal.values[nonzero[0]] else -1
    return SamplerDescriptor(
        boundaries=result.segmentation,
        extrema=find_extrema(signal),
        slope_sign=slope_sign,
        start_value=float(signal.values[0]),
        segment_mass=result.segment_mass,
        n_grid=signal.n_grid,
    )


def infer_derivative(delta: float, segment_mass: float, sign: int) -> float:
    """Recover the local slope of a monotonic segment from its width.

    Since every segment holds the same cube-root-energy mass, a segment of
    width ``delta`` must have slope magnitude ``(mass / delta) ** (3/2)``.
    """
    if not delta > 0:
        raise ValueError(f"segment width must be positive, got {delta}")
    return sign * (segment_mass / delta) ** 1.5


def fit_left_quadratic(
    start_time: float, start_value: float, peak_time: float, peak_value: float
) -> QuadCoeffs:
    """Quadratic entering an extremum: pins the entry point, peaks with zero slope.

    Solves the 3x3 system {value(start_time) = start_value,
    value(peak_time) = peak_value, slope(peak_time) = 0}. Singular when the
    two times coincide.
    """
    if not start_time < peak_time:
        raise ValueError("segment start must precede the extremum")
    gap = start_time - peak_time
    c2 = (start_value - peak_value) / (gap * gap)
    c1 = -2.0 * c2 * peak_time
    c0 = peak_value + c2 * peak_time * peak_time
    return QuadCoeffs(c2, c1, c0)


def fit_right_quadratic(
    peak_time: float,
    peak_value: float,
    end_time: float,
    left: QuadCoeffs,
    start_time: float,
    segment_mass: float,
    was_increasing: bool,
    n_grid: int,
) -> QuadCoeffs:
    """Quadratic leaving an extremum, sized by the segment's leftover mass.

    The arc peaks at ``peak_time`` with zero slope; its linear coefficient's
    magnitude comes from requiring the whole segment to contain the usual
    cube-root-energy mass: whatever the left arc consumed over
    [start_time, peak_time) is subtracted from the quota, and the remainder
    fixes the right arc's slope scale. A maximum (entered while increasing)
    opens downward; a minimum mirrors the signs. A negative remainder is
    clamped to zero, which degrades gracefully to a flat continuation.

    Both integrals use the same left-Riemann rule on the ``n_grid`` grid as
    the rest of the toolkit; times are expected to sit on that grid.
    """
    if not peak_time < end_time:
        raise ValueError("extremum must precede the segment end")
    if not peak_time > 0:
        raise ValueError("extremum cannot sit at the domain origin")
    cells_left = np.arange(round(start_time * n_grid), round(peak_time * n_grid)) / n_grid
    cells_right = np.arange(round(peak_time * n_grid), round(end_time * n_grid)) / n_grid
    consumed = np.sum(np.power(np.square(left.slope(cells_left)), _CBRT_EXP)) / n_grid
    spread = np.sum(np.power(np.square(1.0 - cells_right / peak_time), _CBRT_EXP)) / n_grid
    remainder = max(segment_mass - consumed, 0.0)
    magnitude = (remainder / spread) ** 1.5 if spread > 0 else 0.0
    c1 = magnitude if was_increasing else -magnitude
    c2 = -c1 / (2.0 * peak_time)
    c0 = peak_value - peak_time * c1 / 2.0
    return QuadCoeffs(c2, c1, c0)


def reconstruct(desc: SamplerDescriptor) -> PiecewiseConstant:
    """Rebuild the piecewise-constant approximation from a descriptor alone."""
    samples, _ = _reconstruct_with_state(desc)
    return PiecewiseConstant(desc.boundaries, samples)


def _reconstruct_with_state(desc: SamplerDescriptor) -> tuple[np.ndarray, int]:
    """Sequential reconstruction; also returns the final monotonicity sign."""
    n_grid = desc.n_grid
    b = desc.boundaries.boundaries
    times = b / n_grid
    ext_idx = desc.extrema.indices
    ext_times = ext_idx / n_grid
    ext_values = desc.extrema.values
    mass = desc.segment_mass

    samples = np.empty(desc.boundaries.n_segments)
    estimate = desc.start_value
    sign = desc.slope_sign
    j = 0  # next unconsumed extremum
    for i in range(samples.size):
        seg_start, seg_end = times[i], times[i + 1]
        j_end = j
        while j_end < ext_times.size and ext_times[j_end] < seg_end:
            j_end += 1
        if j_end == j:
            width = seg_end - seg_start
            slope = infer_derivative(width, mass, sign)
            samples[i] = estimate + slope * (width / 2.0)
            estimate = estimate + slope * width
            continue

        # Split at the first extremum; later ones only flip the sign.
        peak_time = ext_times[j]
        peak_value = ext_values[j]
        peak_cell = int(ext_idx[j]) - int(b[i])
        cell_times = np.arange(b[i], b[i + 1]) / n_grid
        if peak_cell > 0:
            left = fit_left_quadratic(seg_start, estimate, peak_time, peak_value)
        else:
            # Extremum sits exactly on the segment's left boundary: the
            # entry-pinning system is singular, so the right-form arc
            # covers the whole segment with the full mass quota.
            left = QuadCoeffs(0.0, 0.0, peak_value)
        right = fit_right_quadratic(
            peak_time,
            peak_value,
            seg_end,
            left,
            seg_start,
            mass,
            sign > 0,
            n_grid,
        )
        left_values = left.value(cell_times[:peak_cell])
        right_values = right.value(cell_times[peak_cell:])
        samples[i] = (left_values.sum() + right_values.sum()) / cell_times.size
        estimate = right.value(seg_end)
        if (j_end - j) % 2:
            sign = -sign
        j = j_end
    return samples, sign
