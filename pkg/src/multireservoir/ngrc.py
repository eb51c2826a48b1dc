"""Next-generation reservoir computing.

No random network: the feature vector is a polynomial dictionary over a
time-shift embedding of the input, the readout is ridge-trained to predict
one-step increments, and closed-loop prediction accumulates those
increments from a sliding window of recent points.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from pathlib import Path

import numpy as np

from .errors import DataTooShort, Divergence, WarmupViolation
from .numerics import ridge_solve
from .reservoir import DIVERGENCE_NORM
from .tasks import TimeSeries


@dataclass(frozen=True)
class NgrcSpec:
    """Dictionary orders, embedding geometry, and training regularization."""

    orders: tuple = (1, 2)
    shifts: int = 2  # k: number of points in the embedding
    stride: int = 1  # s: spacing between embedded points
    regularization: float = 1e-4
    use_quadratic_readout: bool = False

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        if not orders or any(o < 1 for o in orders):
            raise ValueError("orders must be a nonempty list of positive integers")
        if list(orders) != sorted(set(orders)):
            raise ValueError("orders must be strictly increasing")
        if self.shifts < 1 or self.stride < 1:
            raise ValueError("shifts and stride must be at least 1")
        if self.regularization < 0:
            raise ValueError("regularization must be nonnegative")
        object.__setattr__(self, "orders", orders)

    @property
    def warmup(self) -> int:
        """Samples consumed before the first usable feature vector (k*s)."""
        return self.shifts * self.stride


@lru_cache(maxsize=None)
def monomial_exponents(d: int, orders: tuple) -> tuple:
    """Index tuples of all unique monomials over d variables, graded
    lexicographic: orders ascending, variables in index order within each
    order.  Each entry is a tuple of variable indices with repetition."""
    out = []
    for o in orders:
        out.extend(combinations_with_replacement(range(d), o))
    return tuple(out)


def ngrc_feature_count(d: int, k: int, orders) -> int:
    """Dictionary size: sum over orders o of C(k*d + o - 1, o)."""
    orders = tuple(int(o) for o in orders)
    return sum(comb(k * d + o - 1, o) for o in orders)


def time_shift_embed(series: TimeSeries, i: int, k: int, s: int) -> np.ndarray:
    """Concatenate u[i], u[i-s], ..., u[i-(k-1)s] into one vector."""
    if i < (k - 1) * s:
        raise WarmupViolation(
            f"index {i} is inside the warmup window (needs {(k - 1) * s})"
        )
    if i >= series.samples:
        raise IndexError(f"index {i} beyond series of length {series.samples}")
    rows = [series.values[i - b * s] for b in range(k)]
    return np.concatenate(rows)


def poly_dictionary(v: np.ndarray, orders) -> np.ndarray:
    """All unique monomials of the given orders over the entries of v."""
    v = np.asarray(v, dtype=np.float64)
    exps = monomial_exponents(v.size, tuple(int(o) for o in orders))
    out = np.empty(len(exps))
    for m, idx_tuple in enumerate(exps):
        prod = 1.0
        for idx in idx_tuple:
            prod *= v[idx]
        out[m] = prod
    return out


def _embed_block(values: np.ndarray, ends: np.ndarray, k: int, s: int) -> np.ndarray:
    """Embedding vectors for many window ends at once, shape (k*D, len(ends))."""
    d = values.shape[1]
    block = np.empty((k * d, ends.size))
    for b in range(k):
        block[b * d : (b + 1) * d, :] = values[ends - b * s].T
    return block


def _poly_block(lin: np.ndarray, orders) -> np.ndarray:
    """Dictionary features for a (kD, L) block of embedding vectors."""
    exps = monomial_exponents(lin.shape[0], tuple(int(o) for o in orders))
    out = np.empty((len(exps), lin.shape[1]))
    for m, idx_tuple in enumerate(exps):
        acc = lin[idx_tuple[0]].copy()
        for idx in idx_tuple[1:]:
            acc *= lin[idx]
        out[m] = acc
    return out


def _feature_matrix(spec: NgrcSpec, series: TimeSeries, i_train: int):
    """Training features and increment targets for one input segment.

    Columns are window ends m in [warmup, i_train - 1]; the target for
    column m is u[m+1] - u[m] (the increment ahead of the window).
    """
    if i_train is None:
        i_train = series.samples - 1
    if i_train >= series.samples:
        raise DataTooShort(
            f"i_train = {i_train} exceeds series length {series.samples}"
        )
    if i_train < spec.warmup + 1:
        raise DataTooShort(
            f"need more than warmup + 1 = {spec.warmup + 1} samples, "
            f"got i_train = {i_train}"
        )
    ends = np.arange(spec.warmup, i_train)
    lin = _embed_block(series.values, ends, spec.shifts, spec.stride)
    feats = _poly_block(lin, spec.orders)
    if spec.use_quadratic_readout:
        feats = np.vstack([feats, feats * feats])
    targets = (series.values[ends + 1] - series.values[ends]).T
    return feats, targets


def ngrc_train(spec: NgrcSpec, inputs, i_train: int | None = None) -> np.ndarray:
    """Ridge-train the increment readout.

    `inputs` is one series or a sequence of them; with several, features are
    built per segment (warmup applies to each) and concatenated, so no
    feature window straddles a segment boundary.  Returns W_out with one
    column per dictionary feature (doubled when the quadratic readout
    wrapper is enabled).
    """
    if isinstance(inputs, TimeSeries):
        inputs = [inputs]
    blocks = [_feature_matrix(spec, seg, i_train) for seg in inputs]
    X = np.hstack([b[0] for b in blocks])
    Y = np.hstack([b[1] for b in blocks])
    return ridge_solve(X, Y, spec.regularization)


def ngrc_predict(
    spec: NgrcSpec,
    W_out: np.ndarray,
    history: np.ndarray,
    steps: int,
    step: float = 0.01,
) -> TimeSeries:
    """Iterate the trained map forward from a warmup window of samples.

    `history` holds the last k*s input points (oldest first); the returned
    series starts at the final history point and adds `steps` predicted
    points.  A point norm beyond 1e6 raises :class:`Divergence`.
    """
    history = np.asarray(history, dtype=np.float64)
    if history.ndim != 2 or history.shape[0] < (spec.shifts - 1) * spec.stride + 1:
        raise DataTooShort(
            f"history must hold at least {(spec.shifts - 1) * spec.stride + 1} "
            f"points, got shape {history.shape}"
        )
    d = history.shape[1]
    depth = (spec.shifts - 1) * spec.stride + 1
    window = history[-depth:].copy()
    exps = monomial_exponents(spec.shifts * d, spec.orders)
    out = np.empty((steps + 1, d))
    out[0] = window[-1]
    for n in range(steps):
        lin = np.concatenate(
            [window[-1 - b * spec.stride] for b in range(spec.shifts)]
        )
        feats = np.empty(len(exps))
        for m, idx_tuple in enumerate(exps):
            prod = 1.0
            for idx in idx_tuple:
                prod *= lin[idx]
            feats[m] = prod
        if spec.use_quadratic_readout:
            feats = np.concatenate([feats, feats * feats])
        point = window[-1] + W_out @ feats
        if not np.all(np.isfinite(point)) or np.abs(point).max() > DIVERGENCE_NORM:
            raise Divergence(n + 1)
        window = np.vstack([window[1:], point])
        out[n + 1] = point
    return TimeSeries(out, step)


def feature_names(d: int, spec: NgrcSpec) -> list:
    """Human-readable name for each dictionary feature (CSV header order)."""
    base = []
    for v in range(spec.shifts * d):
        b, j = divmod(v, d)
        base.append(f"u{j + 1}[t]" if b == 0 else f"u{j + 1}[t-{b * spec.stride}]")
    names = []
    for idx_tuple in monomial_exponents(spec.shifts * d, spec.orders):
        parts = []
        seen = {}
        for idx in idx_tuple:
            seen[idx] = seen.get(idx, 0) + 1
        for idx in sorted(seen):
            power = seen[idx]
            parts.append(base[idx] if power == 1 else f"{base[idx]}^{power}")
        names.append("*".join(parts))
    if spec.use_quadratic_readout:
        names = names + [f"({name})^2" for name in names]
    return names


def write_readout_csv(path, W_out: np.ndarray, d: int, spec: NgrcSpec) -> None:
    """Persist a trained readout with one named column per feature."""
    path = Path(path)
    names = feature_names(d, spec)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in np.atleast_2d(W_out):
            writer.writerow([repr(float(v)) for v in row])
