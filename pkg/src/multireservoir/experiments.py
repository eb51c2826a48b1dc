"""Trial pipelines and parameter sweeps.

One trial = build a model from a seed, train it on both tasks' signals
jointly (feature matrices concatenated across the two driving signals),
predict closed loop from each task's final listening state, and score the
outcome.  Sweeps repeat trials over seeds and parameter grids with a
deterministic seed ledger so every aggregate is exactly reproducible.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analysis import (
    FloquetSpectrum,
    Rotation,
    StmConfig,
    SuccessReport,
    attractor_reconstruction_check,
    classify_outcome,
    floquet_multipliers,
    li_floquet_multipliers,
    multifunctionality_success,
    stm,
)
from .errors import Divergence, MultireservoirError
from .ngrc import NgrcSpec, ngrc_predict, ngrc_train
from .numerics import ridge_solve
from .reservoir import (
    ModelKind,
    ReservoirSpec,
    TrainedModel,
    build_reservoir,
    ct_listen,
    ct_predict,
    li_listen,
    li_predict,
)
from .tasks import (
    TWO_PI,
    AttractorPairSpec,
    TimeSeries,
    generate_halvorsen,
    generate_lorenz,
    normalize_to_unit_ball,
    seeing_double_pair,
    shift_pair,
)


@dataclass(frozen=True)
class MultifunctionalTrainingSet:
    """The two driving signals one model must learn simultaneously."""

    input_1: TimeSeries
    input_2: TimeSeries
    label_1: str = "task_1"
    label_2: str = "task_2"

    def __post_init__(self):
        if self.input_1.dims != self.input_2.dims:
            raise ValueError("training inputs must share dimensionality")
        if abs(self.input_1.step - self.input_2.step) > 1e-12:
            raise ValueError("training inputs must share the sampling step")


@dataclass(frozen=True)
class TrainingResult:
    """A trained model plus the listening end states that seed prediction."""

    model: TrainedModel
    end_state_1: np.ndarray
    end_state_2: np.ndarray


def train_multifunctional(
    kind: ModelKind,
    spec: ReservoirSpec,
    ts: MultifunctionalTrainingSet,
    matrices=None,
) -> TrainingResult:
    """Listen to both signals independently and fit one joint readout.

    The reservoir is re-zeroed before the second signal, each pass discards
    its own pre-listen transient, and the collected feature matrices are
    concatenated column-wise before one ridge solve.
    """
    if kind not in (ModelKind.CT, ModelKind.LI):
        raise ValueError(f"reservoir training needs CT or LI, got {kind}")
    if matrices is None:
        matrices = build_reservoir(spec, ts.input_1.dims)
    M, W_in = matrices
    listen = ct_listen if kind is ModelKind.CT else li_listen
    states_1, X1 = listen(spec, M, W_in, ts.input_1)
    states_2, X2 = listen(spec, M, W_in, ts.input_2)
    lo, hi = spec.listen_index, spec.train_index + 1
    Y = np.hstack([ts.input_1.values[lo:hi].T, ts.input_2.values[lo:hi].T])
    W_out = ridge_solve(np.hstack([X1, X2]), Y, spec.regularization)
    model = TrainedModel(kind, M, W_in, W_out, spec)
    return TrainingResult(model, states_1[-1], states_2[-1])


def _predict_or_diverged(kind, model, r0, steps):
    predict = ct_predict if kind is ModelKind.CT else li_predict
    try:
        _, out = predict(model, r0, steps)
        return out, None
    except Divergence as exc:
        return None, exc.step


@dataclass(frozen=True)
class TrialReport:
    """Everything recorded about one seeing-double trial."""

    kind: str
    seed: int
    success: bool
    error: str | None
    report: SuccessReport | None
    floquet: tuple[FloquetSpectrum, ...] = ()
    stm_value: float | None = None
    params: dict | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "success": self.success,
            "error": self.error,
            "report": self.report.to_dict() if self.report else None,
            "floquet": [f.to_dict() for f in self.floquet],
            "stm": self.stm_value,
            "params": self.params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _spec_params(spec) -> dict:
    if isinstance(spec, ReservoirSpec):
        return {
            "n_neurons": spec.n_neurons,
            "connectivity": spec.connectivity,
            "rho": spec.spectral_radius_target,
            "sigma": spec.input_strength,
            "gamma": spec.timescale,
            "alpha": spec.leak_rate,
            "beta": spec.regularization,
            "step": spec.step,
            "listen_horizon": spec.listen_horizon,
            "train_horizon": spec.train_horizon,
        }
    return {
        "orders": list(spec.orders),
        "k": spec.shifts,
        "s": spec.stride,
        "beta": spec.regularization,
        "quadratic_readout": spec.use_quadratic_readout,
    }


def run_seeing_double_trial(
    kind: ModelKind,
    spec,
    seed: int,
    predict_periods: float = 10.0,
    train_periods: float = 15.0,
    attach_floquet: bool = False,
    attach_stm: bool = False,
    stm_config: StmConfig | None = None,
) -> TrialReport:
    """One full trial on the counter-rotating circles task.

    Reservoir kinds train on the concatenated responses to both circles and
    predict from each orbit's final listening state; the NG kind trains its
    increment readout on both signals and predicts from each signal's last
    embedding window.  Exceptions mark the trial failed-with-error, which
    is disjoint from an unsuccessful outcome.
    """
    kind = ModelKind(kind)
    try:
        if kind in (ModelKind.CT, ModelKind.LI):
            spec = spec.with_seed(seed)
            step = spec.step
        else:
            step = 0.01
        ca, cb = seeing_double_pair(periods=train_periods, step=step)
        steps = int(round(predict_periods * TWO_PI / step))
        floquet = ()
        stm_value = None
        if kind in (ModelKind.CT, ModelKind.LI):
            ts = MultifunctionalTrainingSet(ca, cb, "C_A", "C_B")
            trained = train_multifunctional(kind, spec, ts)
            pred_a, _ = _predict_or_diverged(
                kind, trained.model, trained.end_state_1, steps
            )
            pred_b, _ = _predict_or_diverged(
                kind, trained.model, trained.end_state_2, steps
            )
            report = multifunctionality_success(pred_a, pred_b)
            if attach_floquet:
                fl = floquet_multipliers if kind is ModelKind.CT else (
                    li_floquet_multipliers
                )
                floquet = (
                    fl(trained.model, ca, "C_A"),
                    fl(trained.model, cb, "C_B"),
                )
            if attach_stm:
                cfg = stm_config or StmConfig(seed=seed)
                if cfg.seed != seed:
                    cfg = replace(cfg, seed=seed)
                stm_value = stm(trained.model.adjacency, spec, cfg, kind=kind).total
        else:
            i_train = int(round(train_periods * TWO_PI / step))
            W_out = ngrc_train(spec, [ca, cb], i_train)
            depth = (spec.shifts - 1) * spec.stride + 1
            preds = []
            for series in (ca, cb):
                history = series.values[i_train - depth + 1 : i_train + 1]
                try:
                    preds.append(
                        ngrc_predict(spec, W_out, history, steps, step=step)
                    )
                except Divergence:
                    preds.append(None)
            report = multifunctionality_success(preds[0], preds[1])
        return TrialReport(
            kind=kind.value,
            seed=seed,
            success=report.success,
            error=None,
            report=report,
            floquet=floquet,
            stm_value=stm_value,
            params=_spec_params(spec),
        )
    except MultireservoirError as exc:
        return TrialReport(
            kind=kind.value,
            seed=seed,
            success=False,
            error=f"{type(exc).__name__}: {exc}",
            report=None,
            params=_spec_params(spec),
        )


def _trial_task(args):
    fn, kwargs = args
    return fn(**kwargs)


def run_trials(tasks, workers: int = 1):
    """Run (callable, kwargs) trial tasks, optionally on a process pool.

    Results come back in task order regardless of completion order.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [_trial_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_task, tasks, chunksize=1))


@dataclass(frozen=True)
class SweepResult:
    """Success counts over a one- or two-axis parameter grid."""

    kind: str
    axis1_name: str
    axis1_values: tuple
    axis2_name: str | None
    axis2_values: tuple | None
    successes: np.ndarray  # (len(axis1),) or (len(axis1), len(axis2))
    errors: np.ndarray
    trials: int
    seeds: tuple
    reports: tuple  # flat tuple of TrialReport, cell-major, seed-minor

    def to_csv(self, path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            if self.axis2_name is None:
                fh.write(f"{self.axis1_name},successes,errors,trials\n")
                for i, v in enumerate(self.axis1_values):
                    fh.write(
                        f"{v!r},{int(self.successes[i])},"
                        f"{int(self.errors[i])},{self.trials}\n"
                    )
            else:
                header = [self.axis1_name + "\\" + self.axis2_name] + [
                    repr(v) for v in self.axis2_values
                ]
                fh.write(",".join(header) + "\n")
                for i, v in enumerate(self.axis1_values):
                    row = [repr(v)] + [
                        str(int(self.successes[i, j]))
                        for j in range(len(self.axis2_values))
                    ]
                    fh.write(",".join(row) + "\n")

    def to_long_csv(self, path) -> None:
        """Plot-ready long format: one (axis1, axis2, value) row per cell."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            axis2 = self.axis2_name or "none"
            fh.write(f"{self.axis1_name},{axis2},successes,trials\n")
            if self.axis2_name is None:
                for i, v in enumerate(self.axis1_values):
                    fh.write(f"{v!r},,{int(self.successes[i])},{self.trials}\n")
            else:
                for i, v1 in enumerate(self.axis1_values):
                    for j, v2 in enumerate(self.axis2_values):
                        fh.write(
                            f"{v1!r},{v2!r},{int(self.successes[i, j])},"
                            f"{self.trials}\n"
                        )

    def to_jsonl(self, path) -> None:
        path = Path(path)
        with path.open("w") as fh:
            for report in self.reports:
                fh.write(report.to_json() + "\n")


def sweep_rho(
    kind: ModelKind,
    base_spec: ReservoirSpec,
    rho_values,
    n_trials: int,
    seed0: int = 0,
    workers: int = 1,
    attach_floquet: bool = False,
) -> SweepResult:
    """Success counts over spectral-radius values, `n_trials` seeds each.

    Every cell reuses the same seed list seed0 .. seed0 + n_trials - 1, so
    curves for different parameters are seed-paired.
    """
    kind = ModelKind(kind)
    seeds = tuple(seed0 + i for i in range(n_trials))
    tasks = []
    for rho in rho_values:
        spec = replace(base_spec, spectral_radius_target=float(rho))
        for seed in seeds:
            tasks.append(
                (
                    run_seeing_double_trial,
                    dict(
                        kind=kind,
                        spec=spec,
                        seed=seed,
                        attach_floquet=attach_floquet,
                    ),
                )
            )
    reports = run_trials(tasks, workers)
    successes = np.zeros(len(rho_values), dtype=int)
    errors = np.zeros(len(rho_values), dtype=int)
    for c, rho in enumerate(rho_values):
        cell = reports[c * n_trials : (c + 1) * n_trials]
        successes[c] = sum(r.success for r in cell)
        errors[c] = sum(r.error is not None for r in cell)
    return SweepResult(
        kind=kind.value,
        axis1_name="rho",
        axis1_values=tuple(float(v) for v in rho_values),
        axis2_name=None,
        axis2_values=None,
        successes=successes,
        errors=errors,
        trials=n_trials,
        seeds=seeds,
        reports=tuple(reports),
    )


def sweep_grid(
    kind: ModelKind,
    base_spec: ReservoirSpec,
    beta_values,
    rate_values,
    n_trials: int,
    seed0: int = 0,
    workers: int = 1,
) -> SweepResult:
    """Success counts over the (regularization, rate) grid at fixed rho.

    `rate_values` is the timescale gamma for the CT kind and the leak rate
    alpha for the LI kind.
    """
    kind = ModelKind(kind)
    seeds = tuple(seed0 + i for i in range(n_trials))
    tasks = []
    for beta in beta_values:
        for rate in rate_values:
            if kind is ModelKind.CT:
                spec = replace(
                    base_spec, regularization=float(beta), timescale=float(rate)
                )
            else:
                spec = replace(
                    base_spec, regularization=float(beta), leak_rate=float(rate)
                )
            for seed in seeds:
                tasks.append(
                    (run_seeing_double_trial, dict(kind=kind, spec=spec, seed=seed))
                )
    reports = run_trials(tasks, workers)
    nb, nr = len(beta_values), len(rate_values)
    successes = np.zeros((nb, nr), dtype=int)
    errors = np.zeros((nb, nr), dtype=int)
    flat = 0
    for i in range(nb):
        for j in range(nr):
            cell = reports[flat * n_trials : (flat + 1) * n_trials]
            successes[i, j] = sum(r.success for r in cell)
            errors[i, j] = sum(r.error is not None for r in cell)
            flat += 1
    return SweepResult(
        kind=kind.value,
        axis1_name="beta",
        axis1_values=tuple(float(v) for v in beta_values),
        axis2_name="gamma" if kind is ModelKind.CT else "alpha",
        axis2_values=tuple(float(v) for v in rate_values),
        successes=successes,
        errors=errors,
        trials=n_trials,
        seeds=seeds,
        reports=tuple(reports),
    )


@dataclass(frozen=True)
class BetaSweepRecord:
    """Readout weights and closed-loop outcome for one regularization."""

    beta: float
    weights: np.ndarray
    success: bool
    outcome_a: str
    outcome_b: str
    report: SuccessReport

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "weights": [[float(v) for v in row] for row in self.weights],
            "success": self.success,
            "outcome_a": self.outcome_a,
            "outcome_b": self.outcome_b,
            "report": self.report.to_dict(),
        }


def ngrc_beta_sweep(
    spec_template: NgrcSpec,
    beta_values,
    train_periods: float = 15.0,
    predict_periods: float = 10.0,
    step: float = 0.01,
) -> list[BetaSweepRecord]:
    """Trace the trained weights and outcome across regularization values."""
    ca, cb = seeing_double_pair(periods=train_periods, step=step)
    i_train = int(round(train_periods * TWO_PI / step))
    steps = int(round(predict_periods * TWO_PI / step))
    depth = (spec_template.shifts - 1) * spec_template.stride + 1
    records = []
    for beta in beta_values:
        spec = replace(spec_template, regularization=float(beta))
        W_out = ngrc_train(spec, [ca, cb], i_train)
        preds = []
        for series in (ca, cb):
            history = series.values[i_train - depth + 1 : i_train + 1]
            try:
                preds.append(ngrc_predict(spec, W_out, history, steps, step=step))
            except Divergence:
                preds.append(None)
        report = multifunctionality_success(preds[0], preds[1])
        records.append(
            BetaSweepRecord(
                beta=float(beta),
                weights=W_out,
                success=report.success,
                outcome_a=(
                    report.outcome_a.outcome.value if report.outcome_a else "diverged"
                ),
                outcome_b=(
                    report.outcome_b.outcome.value if report.outcome_b else "diverged"
                ),
                report=report,
            )
        )
    return records


def make_attractor_pair(pair_spec: AttractorPairSpec):
    """Generate, normalize, and z-shift the two attractor training signals."""
    lorenz = generate_lorenz(
        pair_spec.horizon, pair_spec.step, transient=pair_spec.transient_discard
    )
    halvorsen = generate_halvorsen(
        pair_spec.horizon, pair_spec.step, transient=pair_spec.transient_discard
    )
    lorenz, _ = normalize_to_unit_ball(lorenz)
    halvorsen, _ = normalize_to_unit_ball(halvorsen)
    return shift_pair(lorenz, halvorsen, pair_spec.z_shift)


@dataclass(frozen=True)
class ReconstructionTrial:
    """Per-(kind, dz, seed) outcome of the two-attractor task."""

    kind: str
    dz: float
    seed: int
    success: bool
    error: str | None
    report_1: dict | None
    report_2: dict | None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dz": self.dz,
            "seed": self.seed,
            "success": self.success,
            "error": self.error,
            "lorenz": self.report_1,
            "halvorsen": self.report_2,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def run_reconstruction_trial(
    kind: ModelKind,
    spec,
    seed: int,
    dz: float,
    pair_spec: AttractorPairSpec | None = None,
    predict_horizon: float = 100.0,
) -> ReconstructionTrial:
    """Train on the shifted attractor pair and check both reconstructions."""
    kind = ModelKind(kind)
    if pair_spec is None:
        pair_spec = AttractorPairSpec(z_shift=dz)
    else:
        pair_spec = replace(pair_spec, z_shift=dz)
    try:
        sig_1, sig_2 = make_attractor_pair(pair_spec)
        step = pair_spec.step
        steps = int(round(predict_horizon / step))
        if kind in (ModelKind.CT, ModelKind.LI):
            spec = spec.with_seed(seed)
            ts = MultifunctionalTrainingSet(sig_1, sig_2, "lorenz", "halvorsen")
            trained = train_multifunctional(kind, spec, ts)
            pred_1, _ = _predict_or_diverged(
                kind, trained.model, trained.end_state_1, steps
            )
            pred_2, _ = _predict_or_diverged(
                kind, trained.model, trained.end_state_2, steps
            )
        else:
            i_train = min(sig_1.samples, sig_2.samples) - 1
            W_out = ngrc_train(spec, [sig_1, sig_2], i_train)
            depth = (spec.shifts - 1) * spec.stride + 1
            preds = []
            for series in (sig_1, sig_2):
                history = series.values[i_train - depth + 1 : i_train + 1]
                try:
                    preds.append(
                        ngrc_predict(spec, W_out, history, steps, step=step)
                    )
                except Divergence:
                    preds.append(None)
            pred_1, pred_2 = preds
        check_1 = attractor_reconstruction_check(pred_1, sig_1)
        check_2 = attractor_reconstruction_check(pred_2, sig_2)
        return ReconstructionTrial(
            kind=kind.value,
            dz=float(dz),
            seed=seed,
            success=check_1.success and check_2.success,
            error=None,
            report_1=check_1.to_dict(),
            report_2=check_2.to_dict(),
        )
    except MultireservoirError as exc:
        return ReconstructionTrial(
            kind=kind.value,
            dz=float(dz),
            seed=seed,
            success=False,
            error=f"{type(exc).__name__}: {exc}",
            report_1=None,
            report_2=None,
        )


def lorenz_halvorsen_experiment(
    kinds,
    specs: dict,
    dz_values,
    seeds,
    workers: int = 1,
    pair_spec: AttractorPairSpec | None = None,
) -> list[ReconstructionTrial]:
    """The full reconstruction grid: every kind at every shift and seed.

    `specs` maps each ModelKind to its training spec.  Results are ordered
    (kind, dz, seed), matching the task submission order exactly.
    """
    tasks = []
    for kind in kinds:
        kind = ModelKind(kind)
        for dz in dz_values:
            for seed in seeds:
                tasks.append(
                    (
                        run_reconstruction_trial,
                        dict(
                            kind=kind,
                            spec=specs[kind],
                            seed=seed,
                            dz=float(dz),
                            pair_spec=pair_spec,
                        ),
                    )
                )
    return run_trials(tasks, workers)
