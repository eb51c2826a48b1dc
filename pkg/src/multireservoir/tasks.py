"""Training-signal generation.

Two task families: a pair of three-dimensional chaotic attractors (Lorenz
with a symmetry-breaking +x term in the z equation, and Halvorsen) that are
normalized and shifted apart along z by a controllable amount, and a pair of
fully overlapping planar circles that differ only in rotation direction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataTooShort, DegenerateSeries, DimensionError
from .numerics import rk4_integrate

TWO_PI = 2.0 * np.pi
#: Default sampling step for every generator in this module.
DEFAULT_STEP = 0.01


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A uniformly sampled D-dimensional real signal.

    `values` has shape (samples, dims); `step` is the sampling interval.
    Instances are immutable; transformations return new series.
    """

    values: np.ndarray
    step: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DimensionError(f"series values must be 2-D, got {values.shape}")
        if values.shape[0] < 1:
            raise DataTooShort("series must contain at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("series contains non-finite values")
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        object.__setattr__(self, "values", values)

    @property
    def dims(self) -> int:
        return self.values.shape[1]

    @property
    def samples(self) -> int:
        return self.values.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.step * np.arange(self.samples)

    def window(self, start: int, stop: int) -> "TimeSeries":
        """Samples [start, stop) as a new series."""
        return TimeSeries(self.values[start:stop].copy(), self.step)

    def to_csv(self, path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t"] + [f"x{i + 1}" for i in range(self.dims)])
            for t, row in zip(self.times, self.values):
                writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])

    @classmethod
    def from_csv(cls, path) -> "TimeSeries":
        path = Path(path)
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 2:
            raise DataTooShort(f"{path} holds no samples")
        data = np.array([[float(v) for v in row] for row in rows[1:]])
        times = data[:, 0]
        step = float(times[1] - times[0]) if len(times) > 1 else DEFAULT_STEP
        return cls(data[:, 1:], step)


@dataclass(frozen=True)
class AttractorPairSpec:
    """Configuration for the shifted Lorenz/Halvorsen task data."""

    z_shift: float
    horizon: float = 200.0
    step: float = DEFAULT_STEP
    transient_discard: float = 20.0

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.transient_discard < 0:
            raise ValueError("transient_discard must be nonnegative")
        if self.z_shift < 0:
            raise ValueError("z_shift must be nonnegative")


@dataclass(frozen=True)
class CircleSpec:
    """One circular input orbit x = cx cos(t), y = cy sin(t)."""

    cx: float
    cy: float
    step: float = DEFAULT_STEP
    periods: float = 15.0

    def __post_init__(self):
        if abs(abs(self.cx) - abs(self.cy)) > 1e-12:
            raise ValueError("|cx| and |cy| must match (circular orbit)")
        if self.step <= 0:
            raise ValueError("step must be positive")

    @property
    def radius(self) -> float:
        return abs(self.cx)


def _lorenz_field(t, s):
    x, y, z = s
    # The +x term in dz breaks the x -> -x symmetry on purpose.
    return np.array(
        [
            10.0 * (y - x),
            x * (28.0 - z) - y,
            x * y - (8.0 / 3.0) * z + x,
        ]
    )


def _halvorsen_field(t, s):
    x, y, z = s
    return np.array(
        [
            -1.3 * x - 4.0 * y - 4.0 * z - y * y,
            -1.3 * y - 4.0 * z - 4.0 * x - z * z,
            -1.3 * z - 4.0 * x - 4.0 * y - x * x,
        ]
    )


def _generate_attractor(field, horizon, step, initial, transient) -> TimeSeries:
    n_trans = int(round(transient / step))
    n_keep = int(round(horizon / step))
    states = rk4_integrate(field, initial, 0.0, n_trans + n_keep, step)
    return TimeSeries(states[n_trans:], step)


def generate_lorenz(
    horizon: float,
    step: float = DEFAULT_STEP,
    initial=(1.0, 1.0, 1.0),
    transient: float = 20.0,
) -> TimeSeries:
    """Lorenz trajectory sampled at `step` after discarding `transient`."""
    return _generate_attractor(_lorenz_field, horizon, step, initial, transient)


def generate_halvorsen(
    horizon: float,
    step: float = DEFAULT_STEP,
    initial=(-5.0, 0.0, 0.0),
    transient: float = 20.0,
) -> TimeSeries:
    """Halvorsen trajectory sampled at `step` after discarding `transient`."""
    return _generate_attractor(_halvorsen_field, horizon, step, initial, transient)


def normalize_to_unit_ball(series: TimeSeries) -> tuple[TimeSeries, float]:
    """Divide a series by its largest point norm; returns (series, scale).

    After scaling, the furthest point from the origin has norm exactly 1.
    """
    norms = np.linalg.norm(series.values, axis=1)
    scale = float(norms.max())
    if scale == 0.0:
        raise DegenerateSeries("cannot normalize an all-zero series")
    return TimeSeries(series.values / scale, series.step), scale


def shift_pair(
    a: TimeSeries, b: TimeSeries, dz: float
) -> tuple[TimeSeries, TimeSeries]:
    """Translate two 3-D series apart along z: `a` up by dz, `b` down by dz."""
    if a.dims != 3 or b.dims != 3:
        raise DimensionError("z-shift requires 3-dimensional series")
    va = a.values.copy()
    vb = b.values.copy()
    va[:, 2] += dz
    vb[:, 2] -= dz
    return TimeSeries(va, a.step), TimeSeries(vb, b.step)


def circle_samples(periods: float, step: float = DEFAULT_STEP) -> int:
    """Sample count covering `periods` full revolutions (inclusive endpoints)."""
    return int(round(periods * TWO_PI / step)) + 1


def generate_circle(spec: CircleSpec) -> TimeSeries:
    """Sample (cx cos t, cy sin t) on the step grid over the requested periods."""
    n = circle_samples(spec.periods, spec.step)
    t = spec.step * np.arange(n)
    values = np.column_stack([spec.cx * np.cos(t), spec.cy * np.sin(t)])
    return TimeSeries(values, spec.step)


def seeing_double_pair(
    periods: float = 15.0, step: float = DEFAULT_STEP, radius: float = 5.0
) -> tuple[TimeSeries, TimeSeries]:
    """The two overlapping training circles: counterclockwise and clockwise."""
    ccw = generate_circle(CircleSpec(cx=radius, cy=radius, step=step, periods=periods))
    cw = generate_circle(CircleSpec(cx=-radius, cy=radius, step=step, periods=periods))
    return ccw, cw
