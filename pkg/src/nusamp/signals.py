"""Signal representation, analytic generators, differentiation and extrema detection.

Signals live on a dense uniform grid over [0, 1): sample ``k`` sits at
``t = k / n_grid`` and every grid cell has width ``1 / n_grid``. All
downstream machinery (densities, segmentations, reconstruction) shares
this grid convention.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import check_signal_values

__all__ = [
    "UniformSignal",
    "AnalyticSignalSpec",
    "ExtremaList",
    "parse_signal_spec",
    "generate",
    "derivative",
    "find_extrema",
    "signal_from_csv",
    "signal_to_csv",
]


@dataclass(frozen=True)
class UniformSignal:
    """Amplitudes on the dense uniform grid, plus their declared value range."""

    values: np.ndarray
    value_range: tuple[float, float]

    def __post_init__(self):
        values = check_signal_values(self.values)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        lo, hi = (float(self.value_range[0]), float(self.value_range[1]))
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
            raise ValueError(f"invalid value range ({lo}, {hi})")
        if values.min() < lo or values.max() > hi:
            raise ValueError("signal values fall outside the declared range")
        object.__setattr__(self, "value_range", (lo, hi))

    @property
    def n_grid(self) -> int:
        return self.values.size

    @property
    def cell_width(self) -> float:
        return 1.0 / self.values.size

    @property
    def times(self) -> np.ndarray:
        """Left edge of every grid cell."""
        return np.arange(self.values.size) / self.values.size

    @classmethod
    def from_values(cls, values) -> "UniformSignal":
        """Wrap raw amplitudes, declaring their own min/max as the range."""
        arr = check_signal_values(values)
        return cls(arr, (float(arr.min()), float(arr.max())))


@dataclass(frozen=True)
class AnalyticSignalSpec:
    """Parameters of one of the built-in analytic test signals.

    kind:
      - ``"exponential"``: exp(alpha * t), alpha > 0
      - ``"cosine"``: cos(2 pi alpha t), alpha a positive integer (full periods)
      - ``"chirp"``: cos(2 pi t (1 + alpha t)), alpha > 0 (linearly rising frequency)
      - ``"linear"``: slope * t + offset
    The final amplitudes are multiplied by ``scale``.
    """

    kind: str
    alpha: float = 1.0
    slope: float = 1.0
    offset: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("exponential", "cosine", "chirp", "linear"):
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if self.kind in ("exponential", "chirp") and not self.alpha > 0:
            raise ValueError(f"{self.kind} signals need alpha > 0, got {self.alpha}")
        if self.kind == "cosine":
            if self.alpha <= 0 or self.alpha != int(self.alpha):
                raise ValueError(f"cosine signals need a positive integer alpha, got {self.alpha}")

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        if self.kind == "exponential":
            out = np.exp(self.alpha * t)
        elif self.kind == "cosine":
            out = np.cos(2.0 * np.pi * self.alpha * t)
        elif self.kind == "chirp":
            out = np.cos(2.0 * np.pi * t * (1.0 + self.alpha * t))
        else:
            out = self.slope * t + self.offset
        return self.scale * out


_SPEC_ALIASES = {
    "exp": "exponential",
    "exponential": "exponential",
    "cos": "cosine",
    "cosine": "cosine",
    "chirp": "chirp",
    "linear": "linear",
}


def parse_signal_spec(text: str) -> AnalyticSignalSpec:
    """Parse a CLI signal string such as ``exp:alpha=3`` or ``cos:alpha=5,scale=255``."""
    head, _, tail = text.partition(":")
    kind = _SPEC_ALIASES.get(head.strip().lower())
    if kind is None:
        raise ValueError(f"unknown signal kind {head!r}")
    kwargs = {}
    if tail.strip():
        for item in tail.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in ("alpha", "slope", "offset", "scale"):
                raise ValueError(f"bad signal parameter {item!r}")
            kwargs[key] = float(value)
    return AnalyticSignalSpec(kind=kind, **kwargs)


def generate(spec: AnalyticSignalSpec, n_grid: int) -> UniformSignal:
    """Evaluate an analytic spec on the dense grid ``t_k = k / n_grid``."""
    n_grid = int(n_grid)
    if n_grid < 2:
        raise ValueError(f"n_grid must be >= 2, got {n_grid}")
    t = np.arange(n_grid) / n_grid
    return UniformSignal.from_values(spec.evaluate(t))


def derivative(signal: UniformSignal) -> np.ndarray:
    """Forward-difference slope on the grid, in amplitude per unit time.

    Entry ``k`` is ``(values[k+1] - values[k]) * n_grid``; the final entry
    replicates its predecessor so the result has one slope per grid cell.
    Forward differences keep the telescoping identity
    ``sum(derivative * cell_width) == values[k] - values[0]`` free of
    quadrature error, which makes segment-mass accounting reproducible.
    """
    x = signal.values
    d = np.empty(x.size)
    d[:-1] = np.diff(x) * x.size
    d[-1] = d[-2]
    return d


@dataclass(frozen=True)
class ExtremaList:
    """Interior local extrema as (grid index, amplitude) pairs, in time order."""

    indices: np.ndarray
    values: np.ndarray
    n_grid: int = field(default=0)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or val.shape != idx.shape:
            raise ValueError("extrema indices and values must be matching 1-D arrays")
        if idx.size and (np.any(np.diff(idx) <= 0)):
            raise ValueError("extrema indices must be strictly increasing")
        if self.n_grid and idx.size and (idx[0] <= 0 or idx[-1] >= self.n_grid):
            raise ValueError("extrema must lie strictly inside the grid")
        idx.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @property
    def count(self) -> int:
        return self.indices.size


def find_extrema(signal: UniformSignal) -> ExtremaList:
    """Locate interior extrema from forward-difference sign changes.

    An extremum is reported at the grid index whose forward difference first
    carries the new sign; across a zero-difference plateau this is the first
    index after the plateau at which the opposite sign appears, and it still
    holds the plateau amplitude. Consecutive entries therefore alternate
    between maxima and minima, and the domain endpoints are never reported.
    """
    x = signal.values
    d = np.diff(x)
    nz = np.flatnonzero(d)
    if nz.size < 2:
        return ExtremaList(np.empty(0, np.int64), np.empty(0), x.size)
    signs = np.sign(d[nz])
    flips = np.flatnonzero(signs[1:] != signs[:-1])
    idx = nz[flips + 1]
    return ExtremaList(idx.astype(np.int64), x[idx], x.size)


def signal_from_csv(path, value_range: tuple[float, float] | None = None) -> UniformSignal:
    """Load one amplitude per line; a non-numeric first line is treated as a header."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty signal file")
    start = 0
    try:
        float(lines[0].split(",")[0])
    except ValueError:
        start = 1
    values = np.array([float(line.split(",")[0]) for line in lines[start:] if line.strip()])
    if value_range is None:
        return UniformSignal.from_values(values)
    return UniformSignal(values, value_range)


def signal_to_csv(signal: UniformSignal, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["amplitude"])
        for v in signal.values:
            writer.writerow([repr(float(v))])
