"""Outcome classification and diagnostics for closed-loop predictions.

Three instruments: a roundness-based success test for the circle task, the
short-term memory capacity of a driven reservoir, and Floquet multipliers
of a closed-loop periodic orbit via integration of the variational
equation along the driven reference orbit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DataTooShort, DimensionError, Indeterminate
from .numerics import eigenvalues, ridge_solve, split_horizon, variational_rk4
from .reservoir import (
    ModelKind,
    ReservoirSpec,
    TrainedModel,
    _ct_jacobian_cached,
    _li_jacobian_cached,
    ct_drive,
    generate_input_matrix,
    li_drive,
)
from .rng import ROLE_STM_INPUT, ROLE_STM_SIGNAL, Xoshiro256StarStar
from .tasks import TWO_PI, TimeSeries

#: Point norm beyond which a series is classified as divergent.
DIVERGED_NORM = 1e6
#: Trailing-half standard deviation below which a series is a fixed point.
FIXED_POINT_STD = 1e-4
#: Recurrence distance threshold, relative to signal amplitude.
RECURRENCE_REL = 1e-2
#: Success threshold on the larger of the two cycle roundness values.
ROUNDNESS_THRESHOLD = 0.5


class OutcomeClass(str, enum.Enum):
    DIVERGED = "diverged"
    FIXED_POINT = "fixed_point"
    PERIODIC = "periodic"
    BOUNDED_APERIODIC = "bounded_aperiodic"


class Rotation(str, enum.Enum):
    CW = "cw"
    CCW = "ccw"


@dataclass(frozen=True)
class TrialOutcome:
    """Classification of one closed-loop prediction."""

    outcome: OutcomeClass
    period_estimate: float | None = None
    rotation: Rotation | None = None
    roundness: float | None = None
    recurrence_distance: float | None = None
    amplitude: float | None = None

    def to_dict(self) -> dict:
        return {
            "class": self.outcome.value,
            "period_estimate": self.period_estimate,
            "rotation": self.rotation.value if self.rotation else None,
            "roundness": self.roundness,
            "recurrence_distance": self.recurrence_distance,
            "amplitude": self.amplitude,
        }


@dataclass(frozen=True)
class FloquetSpectrum:
    """Multipliers of one closed-loop periodic orbit, magnitude sorted."""

    multipliers: np.ndarray
    orbit_label: str
    period: float
    overflow: bool = False
    orbit_drift: float = 0.0
    extension: bool = False  # True for the discrete (LI) variant

    def to_dict(self) -> dict:
        return {
            "orbit": self.orbit_label,
            "period": self.period,
            "overflow": self.overflow,
            "orbit_drift": self.orbit_drift,
            "extension": self.extension,
            "multipliers": [[float(v.real), float(v.imag)] for v in self.multipliers],
        }


def floquet_stable(spectrum: FloquetSpectrum, tol: float = 1e-2) -> bool:
    """Is the orbit stable by its multipliers?

    The trivial multiplier (the one closest to 1 + 0i, corresponding to
    perturbations along the flow) is excluded; the orbit is stable when
    every remaining multiplier lies inside the unit circle within `tol`.
    """
    if spectrum.overflow:
        return False
    vals = spectrum.multipliers
    if vals.size == 0:
        return False
    trivial = int(np.argmin(np.abs(vals - 1.0)))
    rest = np.abs(np.delete(vals, trivial))
    if rest.size == 0:
        return True
    return bool(rest.max() < 1.0 + tol)


@dataclass(frozen=True)
class StmConfig:
    """Configuration of the short-term memory probe."""

    max_shift: int = 100
    signal_length: int = 5000
    washout: int = 500
    regularization: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.max_shift < 1:
            raise ValueError("max_shift must be at least 1")
        if self.signal_length <= self.washout + self.max_shift:
            raise ValueError("signal_length must exceed washout + max_shift")


def _autocorrelation(x: np.ndarray) -> np.ndarray:
    """Unbiased sample autocorrelation of a demeaned signal, via FFT.

    Each lag is normalized by its overlap count so that a strictly periodic
    signal peaks at (nearly) 1 at its period instead of being tapered
    toward small lags.
    """
    n = x.size
    m = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(x, m)
    raw = np.fft.irfft(spec * np.conj(spec), m)[:n]
    raw /= np.arange(n, 0, -1)
    if raw[0] <= 0:
        return np.zeros(n)
    return raw / raw[0]


def _estimate_period(x: np.ndarray) -> float | None:
    """Strongest autocorrelation lag of a scalar signal, in samples.

    The returned lag may be any multiple of the fundamental period (the
    unbiased autocorrelation of a periodic signal peaks equally at every
    multiple); callers resolve the fundamental against the actual
    recurrence distance.
    """
    acf = _autocorrelation(x - x.mean())
    half = x.size // 2
    if half < 4:
        return None
    below = np.nonzero(acf[:half] < 0.0)[0]
    if below.size == 0:
        return None
    start = int(below[0])
    lag = start + int(np.argmax(acf[start:half]))
    if lag <= 1 or lag >= half - 1 or acf[lag] <= 0.0:
        return None
    return float(lag)


def _refine_period(
    window: np.ndarray, period: float, halfwidth: float = 3.0
) -> tuple[float, float]:
    """Tune a period estimate by minimizing recurrence over nearby lags.

    Scans fractional lags within +-halfwidth samples and returns
    (best_period, recurrence_distance), where the distance is the worst
    sample-to-recurred-sample gap over the final cycle.
    """
    n = window.shape[0]
    best_p = period
    best_d = np.inf
    for p in np.arange(period - halfwidth, period + halfwidth + 1e-9, 0.05):
        span = int(np.ceil(p))
        if p <= 1.0 or span + p + 1 > n:
            continue
        idx = np.arange(n - span, n, dtype=np.float64)
        shifted = _interp_rows(window, idx - p)
        dist = float(
            np.linalg.norm(window[idx.astype(int)] - shifted, axis=1).max()
        )
        if dist < best_d:
            best_d = dist
            best_p = float(p)
    return best_p, best_d


def _detect_period(
    window: np.ndarray, amplitude: float
) -> tuple[float | None, float]:
    """Fundamental period of a multivariate window, with recurrence distance.

    Starts from the strongest autocorrelation lag of the highest-variance
    coordinate, walks its integer divisors from the smallest plausible
    period upward, and accepts the first one whose refined recurrence beats
    the periodicity threshold; otherwise reports the best candidate seen.
    """
    coord = int(np.argmax(window.std(axis=0)))
    lag = _estimate_period(window[:, coord])
    if lag is None:
        return None, np.inf
    candidates = sorted(
        {
            lag / m
            for m in range(1, 11)
            if lag / m >= 2.0 and 2.0 * (lag / m) + 4.0 <= window.shape[0]
        }
    )
    best = (None, np.inf)
    for p in candidates:
        p_ref, dist = _refine_period(window, p)
        if dist < RECURRENCE_REL * amplitude:
            return p_ref, dist
        if dist < best[1]:
            best = (p_ref, dist)
    return best


def _interp_rows(values: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Linear interpolation of an (L, D) array at fractional row positions."""
    lo = np.floor(positions).astype(int)
    hi = np.minimum(lo + 1, values.shape[0] - 1)
    w = (positions - lo)[:, np.newaxis]
    return (1.0 - w) * values[lo] + w * values[hi]


def rotation_direction(cycle: np.ndarray) -> Rotation:
    """Rotation sense of a planar cycle from its signed area.

    Positive signed area (shoelace sum over consecutive samples) means
    counterclockwise.  A degenerate cycle raises :class:`Indeterminate`.
    """
    cycle = np.asarray(cycle, dtype=np.float64)
    if cycle.ndim != 2 or cycle.shape[1] != 2:
        raise DimensionError("rotation direction needs an (L, 2) cycle")
    x = cycle[:, 0]
    y = cycle[:, 1]
    area = float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))
    scale = float(np.abs(cycle).max())
    if abs(area) <= 1e-12 * max(scale * scale, 1.0):
        raise Indeterminate("cycle encloses no signed area")
    return Rotation.CCW if area > 0 else Rotation.CW


def roundness(cycle: np.ndarray, center=(0.0, 0.0)) -> float:
    """Annulus width of one predicted cycle around `center`.

    The difference between the radius of the smallest enclosing and largest
    inscribed circle centered at `center` over the cycle's samples.
    """
    cycle = np.asarray(cycle, dtype=np.float64)
    if cycle.ndim != 2 or cycle.shape[1] != 2:
        raise DimensionError("roundness needs an (L, 2) cycle")
    if cycle.shape[0] < 8:
        raise DataTooShort("need at least 8 samples per period for roundness")
    dist = np.linalg.norm(cycle - np.asarray(center, dtype=np.float64), axis=1)
    return float(dist.max() - dist.min())


def classify_outcome(
    series: TimeSeries, center=(0.0, 0.0), min_samples: int = 50
) -> TrialOutcome:
    """Classify a prediction as diverged, fixed point, periodic, or
    bounded aperiodic.

    Periodicity is decided on the trailing 60% of the series: the dominant
    autocorrelation period of the highest-variance coordinate must recur
    within 1% of the signal amplitude.  For periodic planar series the
    rotation sense and roundness (about `center`) are attached.
    """
    v = series.values
    if v.shape[0] < min_samples:
        raise DataTooShort(f"need at least {min_samples} samples to classify")
    norms = np.linalg.norm(v, axis=1)
    if not np.all(np.isfinite(v)) or norms.max() > DIVERGED_NORM:
        return TrialOutcome(OutcomeClass.DIVERGED)
    tail = v[v.shape[0] // 2 :]
    if np.all(tail.std(axis=0) < FIXED_POINT_STD):
        return TrialOutcome(OutcomeClass.FIXED_POINT)
    window = v[int(0.4 * v.shape[0]) :]
    centered = window - window.mean(axis=0)
    amplitude = float(np.linalg.norm(centered, axis=1).max())
    period, recurrence = _detect_period(window, amplitude)
    if (
        period is None
        or amplitude == 0.0
        or recurrence >= RECURRENCE_REL * amplitude
    ):
        return TrialOutcome(
            OutcomeClass.BOUNDED_APERIODIC,
            recurrence_distance=None if period is None else recurrence,
            amplitude=amplitude,
        )
    span = int(np.ceil(period))
    rot = None
    rnd = None
    if series.dims == 2:
        cycle = window[-span:]
        try:
            rot = rotation_direction(cycle)
        except Indeterminate:
            rot = None
        if span >= 8:
            rnd = roundness(cycle, center)
    return TrialOutcome(
        OutcomeClass.PERIODIC,
        period_estimate=float(period * series.step),
        rotation=rot,
        roundness=rnd,
        recurrence_distance=recurrence,
        amplitude=amplitude,
    )


@dataclass(frozen=True)
class SuccessReport:
    """Verdict and the metrics behind one multifunctionality test."""

    success: bool
    outcome_a: TrialOutcome | None
    outcome_b: TrialOutcome | None
    reasons: tuple = ()

    @property
    def max_roundness(self) -> float | None:
        vals = [
            o.roundness
            for o in (self.outcome_a, self.outcome_b)
            if o is not None and o.roundness is not None
        ]
        return max(vals) if vals else None

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "reasons": list(self.reasons),
            "max_roundness": self.max_roundness,
            "orbit_a": self.outcome_a.to_dict() if self.outcome_a else None,
            "orbit_b": self.outcome_b.to_dict() if self.outcome_b else None,
        }


def multifunctionality_success(
    pred_a: TimeSeries | None,
    pred_b: TimeSeries | None,
    expected_a: Rotation = Rotation.CCW,
    expected_b: Rotation = Rotation.CW,
) -> SuccessReport:
    """Did one trained model reproduce both circles?

    Requires each prediction to be periodic, rotating in its training
    orbit's direction, with the larger roundness below 0.5.  A `None`
    prediction stands for a run that diverged before finishing.
    """
    reasons = []
    outcomes = []
    for name, pred, expected in (
        ("A", pred_a, expected_a),
        ("B", pred_b, expected_b),
    ):
        if pred is None:
            outcomes.append(TrialOutcome(OutcomeClass.DIVERGED))
            reasons.append(f"prediction {name} diverged")
            continue
        outcome = classify_outcome(pred)
        outcomes.append(outcome)
        if outcome.outcome is not OutcomeClass.PERIODIC:
            reasons.append(f"prediction {name} not periodic ({outcome.outcome.value})")
        elif outcome.rotation is not expected:
            reasons.append(f"prediction {name} rotates against its target")
    outcome_a, outcome_b = outcomes
    if not reasons:
        if outcome_a.roundness is None or outcome_b.roundness is None:
            reasons.append("cycle too coarse for a roundness measurement")
        else:
            worst = max(outcome_a.roundness, outcome_b.roundness)
            if not worst < ROUNDNESS_THRESHOLD:
                reasons.append(
                    f"max roundness {worst:.3f} above {ROUNDNESS_THRESHOLD}"
                )
    return SuccessReport(
        success=not reasons,
        outcome_a=outcome_a,
        outcome_b=outcome_b,
        reasons=tuple(reasons),
    )


@dataclass(frozen=True)
class StmResult:
    """Short-term memory capacity with its per-delay breakdown."""

    total: float
    per_delay: np.ndarray

    def to_dict(self) -> dict:
        return {"stm": self.total, "per_delay": [float(v) for v in self.per_delay]}


def stm(
    M: np.ndarray,
    spec: ReservoirSpec,
    cfg: StmConfig,
    kind: ModelKind = ModelKind.LI,
) -> StmResult:
    """Short-term memory capacity of the reservoir defined by M and `spec`.

    Drives the reservoir with an i.i.d. uniform signal on [-1, 1] through a
    fresh input matrix (the adjacency M is shared with the prediction
    model, the input matrix is not), trains one linear readout per delay j
    on the driven states, and sums the squared correlations between each
    delayed input and its readout on held-out driven states.  The loop is
    never closed.
    """
    signal_rng = Xoshiro256StarStar(cfg.seed, ROLE_STM_SIGNAL)
    mu = signal_rng.symmetric_uniforms(cfg.signal_length)
    W_in = generate_input_matrix(spec.n_neurons, 1, cfg.seed, role=ROLE_STM_INPUT)
    inputs = mu[:, np.newaxis]
    if kind is ModelKind.LI:
        states = li_drive(M, W_in, spec.input_strength, spec.leak_rate, inputs)
    elif kind is ModelKind.CT:
        states = ct_drive(
            M, W_in, spec.input_strength, spec.timescale, spec.step, inputs
        )
    else:
        raise ValueError(f"no STM drive for kind {kind}")
    # State r[n] has seen inputs mu[0 .. n-1]; delay j targets mu[n - j].
    start = max(cfg.washout, cfg.max_shift)
    valid = np.arange(start, cfg.signal_length + 1)
    n_train = int(0.7 * valid.size)
    train_idx = valid[:n_train]
    eval_idx = valid[n_train:]
    X_train = states[train_idx].T
    Y_train = np.empty((cfg.max_shift, train_idx.size))
    for j in range(1, cfg.max_shift + 1):
        Y_train[j - 1] = mu[train_idx - j]
    W = ridge_solve(X_train, Y_train, cfg.regularization)
    preds = W @ states[eval_idx].T
    per_delay = np.zeros(cfg.max_shift)
    for j in range(1, cfg.max_shift + 1):
        target = mu[eval_idx - j]
        out = preds[j - 1]
        st = target.std()
        so = out.std()
        if st == 0.0 or so == 0.0:
            continue
        c = float(np.mean((target - target.mean()) * (out - out.mean())) / (st * so))
        if np.isfinite(c):
            per_delay[j - 1] = c * c
    return StmResult(float(per_delay.sum()), per_delay)


def monodromy_along_orbit(
    jacobians, step_sizes, dim: int
) -> tuple[np.ndarray, bool]:
    """One-period solution of Q' = J(t) Q with per-step constant J.

    `jacobians(n)` returns the coefficient matrix for step n (held across
    that step's RK4 stages, the same zero-order-hold convention used for
    driving inputs).  Returns (Q, overflow).
    """
    cache = {}

    def provider(n, _t):
        if n not in cache:
            cache.clear()
            cache[n] = jacobians(n)
        return cache[n]

    return variational_rk4(provider, step_sizes, dim)


def floquet_multipliers(
    model: TrainedModel,
    driving: TimeSeries,
    label: str,
    transient_periods: int = 6,
    period: float = TWO_PI,
) -> FloquetSpectrum:
    """Floquet multipliers of the closed-loop response to a periodic drive.

    Drives the listening system to its periodic response (discarding
    `transient_periods` periods), records the reference orbit over exactly
    one period (fractional final step included), integrates the variational
    equation with the closed-loop Jacobian evaluated along that orbit, and
    returns the eigenvalues of the resulting monodromy matrix.
    """
    if model.kind is not ModelKind.CT:
        raise ValueError("Floquet analysis by variational flow needs a CT model")
    spec = model.spec
    tau = spec.step
    n_trans = int(round(transient_periods * period / tau))
    nfull, h_last = split_horizon(period, tau)
    needed = n_trans + nfull + 1
    if driving.samples < needed:
        raise DataTooShort(
            f"driving signal has {driving.samples} samples, needs {needed}"
        )
    states = ct_drive(
        model.adjacency,
        model.input_matrix,
        spec.input_strength,
        spec.timescale,
        tau,
        driving.values,
        steps=n_trans + nfull,
    )
    ref = states[n_trans : n_trans + nfull + 1]
    # Driven-orbit periodicity residual: close the period with the final
    # (possibly fractional) step and compare against the orbit start.
    sigma = spec.input_strength
    gamma = spec.timescale
    M = model.adjacency
    W_in = model.input_matrix
    u_last = driving.values[n_trans + nfull]
    r_end = ref[-1]
    if h_last > 0.0:
        drive = sigma * (W_in @ u_last)

        def fld(r_):
            return gamma * (-r_ + np.tanh(M @ r_ + drive))

        k1 = fld(r_end)
        k2 = fld(r_end + 0.5 * h_last * k1)
        k3 = fld(r_end + 0.5 * h_last * k2)
        k4 = fld(r_end + h_last * k3)
        r_end = r_end + (h_last / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    drift = float(np.linalg.norm(r_end - ref[0]))
    n = spec.n_neurons
    B = model.feedback_matrix
    B1 = np.ascontiguousarray(B[:, :n])
    B2 = np.ascontiguousarray(B[:, n:])
    step_sizes = [tau] * nfull + ([h_last] if h_last > 0.0 else [])

    def jac(idx):
        return _ct_jacobian_cached(gamma, M, B1, B2, ref[idx])

    Q, overflow = monodromy_along_orbit(jac, step_sizes, n)
    multipliers = eigenvalues(Q)
    return FloquetSpectrum(
        multipliers=multipliers,
        orbit_label=label,
        period=period,
        overflow=overflow,
        orbit_drift=drift,
    )


def li_floquet_multipliers(
    model: TrainedModel,
    driving: TimeSeries,
    label: str,
    transient_periods: int = 6,
    period: float = TWO_PI,
) -> FloquetSpectrum:
    """Discrete-time analogue for the leaky-integrator reservoir.

    The monodromy matrix is the ordered product of per-step Jacobians of
    the closed-loop map along the driven response over one period (rounded
    to the sample grid; a map cannot take fractional steps).  Reported with
    the `extension` flag: the variational treatment is native to the
    continuous-time model only.
    """
    if model.kind is not ModelKind.LI:
        raise ValueError("discrete Floquet analysis needs an LI model")
    spec = model.spec
    tau = spec.step
    n_trans = int(round(transient_periods * period / tau))
    n_period = int(round(period / tau))
    needed = n_trans + n_period + 1
    if driving.samples < needed:
        raise DataTooShort(
            f"driving signal has {driving.samples} samples, needs {needed}"
        )
    states = li_drive(
        model.adjacency,
        model.input_matrix,
        spec.input_strength,
        spec.leak_rate,
        driving.values,
        steps=n_trans + n_period,
    )
    ref = states[n_trans : n_trans + n_period + 1]
    drift = float(np.linalg.norm(ref[-1] - ref[0]))
    n = spec.n_neurons
    B = model.feedback_matrix
    B1 = np.ascontiguousarray(B[:, :n])
    B2 = np.ascontiguousarray(B[:, n:])
    Q = np.eye(n)
    overflow = False
    for i in range(n_period):
        Q = _li_jacobian_cached(spec.leak_rate, model.adjacency, B1, B2, ref[i]) @ Q
        if not np.isfinite(Q).all() or np.abs(Q).max() > 1e12:
            overflow = True
            break
    multipliers = eigenvalues(Q)
    return FloquetSpectrum(
        multipliers=multipliers,
        orbit_label=label,
        period=n_period * tau,
        overflow=overflow,
        orbit_drift=drift,
        extension=True,
    )


@dataclass(frozen=True)
class ReconstructionReport:
    """Verdict of the coarse attractor-reconstruction check."""

    success: bool
    outcome: TrialOutcome | None
    inside_fraction: float | None
    mean_z_prediction: float | None
    mean_z_reference: float
    reasons: tuple = ()

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "reasons": list(self.reasons),
            "outcome": self.outcome.to_dict() if self.outcome else None,
            "inside_fraction": self.inside_fraction,
            "mean_z_prediction": self.mean_z_prediction,
            "mean_z_reference": self.mean_z_reference,
        }


def attractor_reconstruction_check(
    prediction: TimeSeries | None, reference: TimeSeries
) -> ReconstructionReport:
    """Coarse test that a prediction stayed on the intended attractor.

    Requires a bounded aperiodic prediction, at least 90% of its points
    inside the reference bounding box inflated by 20%, and a matching sign
    of the mean z coordinate when the reference is meaningfully off-center.
    `None` stands for a prediction that diverged.
    """
    if reference.dims != 3:
        raise DimensionError("reference must be 3-dimensional")
    mean_z_ref = float(reference.values[:, 2].mean())
    if prediction is None:
        return ReconstructionReport(
            False, None, None, None, mean_z_ref, ("prediction diverged",)
        )
    if prediction.dims != 3:
        raise DimensionError("prediction must be 3-dimensional")
    reasons = []
    outcome = classify_outcome(prediction)
    if outcome.outcome is not OutcomeClass.BOUNDED_APERIODIC:
        reasons.append(f"prediction classified {outcome.outcome.value}")
    lo = reference.values.min(axis=0)
    hi = reference.values.max(axis=0)
    center = 0.5 * (lo + hi)
    half = 0.6 * (hi - lo)  # 20% inflation of the half-width
    inside = np.all(np.abs(prediction.values - center) <= half, axis=1)
    inside_fraction = float(inside.mean())
    if inside_fraction < 0.9:
        reasons.append(f"only {inside_fraction:.1%} of points inside the box")
    mean_z_pred = float(prediction.values[:, 2].mean())
    if abs(mean_z_ref) > 0.05 and np.sign(mean_z_pred) != np.sign(mean_z_ref):
        reasons.append("mean z sign mismatch")
    return ReconstructionReport(
        success=not reasons,
        outcome=outcome,
        inside_fraction=inside_fraction,
        mean_z_prediction=mean_z_pred,
        mean_z_reference=mean_z_ref,
        reasons=tuple(reasons),
    )
