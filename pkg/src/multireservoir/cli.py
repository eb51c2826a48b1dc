"""Command-line entry point.

Every command reads one flat key/value configuration (file plus repeatable
--set overrides, with named presets expanded first), runs an experiment,
and writes its artifacts into a fresh timestamped subdirectory: the
effective configuration, the seed ledger, a results.csv, and per-trial
JSON lines where applicable.  Run directories are append-only; reruns with
the same configuration and seeds produce byte-identical results.csv.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import StmConfig, classify_outcome, floquet_stable, stm
from .errors import ConfigError, MultireservoirError
from .experiments import (
    lorenz_halvorsen_experiment,
    make_attractor_pair,
    ngrc_beta_sweep,
    run_seeing_double_trial,
    run_trials,
    sweep_grid,
    sweep_rho,
    train_multifunctional,
    MultifunctionalTrainingSet,
)
from .ngrc import feature_names, ngrc_predict, ngrc_train, write_readout_csv
from .presets import PRESETS, ngrc_spec_from, reservoir_spec_from, spec_for_kind
from .reservoir import (
    ModelKind,
    ReservoirSpec,
    TrainedModel,
    build_reservoir,
    ct_predict,
    li_predict,
)
from .tasks import TWO_PI, AttractorPairSpec, TimeSeries, seeing_double_pair

COMMANDS = (
    "gen-data",
    "train",
    "predict",
    "sweep-rho",
    "sweep-grid",
    "ngrc-beta-sweep",
    "lorenz-halvorsen",
    "floquet",
    "stm",
)

# One flat schema shared by all commands: key -> (type tag, default).
SCHEMA = {
    "command": ("str", ""),
    "preset": ("str", ""),
    "output_dir": ("str", "runs"),
    "seed0": ("int", 0),
    "n_trials": ("int", 20),
    "workers": ("int", 1),
    "kind": ("str", "ct"),
    "kinds": ("str_list", ["ct", "li", "ng"]),
    "task": ("str", "seeing-double"),
    "model_dir": ("str", ""),
    # reservoir hyperparameters
    "n_neurons": ("int", 500),
    "connectivity": ("float", 0.05),
    "rho": ("float", 1.4),
    "sigma": ("float", 0.2),
    "gamma": ("float", 5.0),
    "alpha": ("float", 0.05),
    "beta": ("float", 1e-2),
    "step": ("float", 0.01),
    "listen_horizon": ("float", 6.0 * TWO_PI),
    "train_horizon": ("float", 15.0 * TWO_PI),
    # NG hyperparameters
    "orders": ("int_list", [1, 2]),
    "k": ("int", 2),
    "s": ("int", 1),
    "quadratic_readout": ("bool", False),
    # task geometry and horizons
    "train_periods": ("float", 15.0),
    "predict_periods": ("float", 10.0),
    "dz": ("float", 1.0),
    "horizon": ("float", 200.0),
    "transient": ("float", 20.0),
    "predict_horizon": ("float", 100.0),
    # sweep axes
    "rho_values": ("float_list", [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8]),
    "beta_values": ("float_list", []),
    "rate_values": ("float_list", []),
    "dz_values": ("float_list", [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5]),
    "beta_min": ("float", 1e-12),
    "beta_max": ("float", 1e3),
    "beta_points": ("int", 40),
    # STM probe
    "stm_max_shift": ("int", 100),
    "stm_signal_length": ("int", 5000),
    "stm_washout": ("int", 500),
    "stm_beta": ("float", 1e-6),
    # Floquet
    "transient_periods": ("int", 6),
}


@dataclass(frozen=True)
class RunConfig:
    """The effective, fully typed configuration of one run."""

    values: dict

    def __getitem__(self, key):
        return self.values[key]

    @property
    def command(self) -> str:
        return self.values["command"]


def _parse_scalar(key: str, text: str, tag: str):
    text = text.strip()
    try:
        if tag == "int":
            if "." in text or "e" in text.lower():
                # Accept integral floats like 1e3 but reject fractions.
                val = float(text)
                if val != int(val):
                    raise ValueError
                return int(val)
            return int(text)
        if tag == "float":
            return float(text)
        if tag == "bool":
            if text.lower() in ("true", "1", "yes"):
                return True
            if text.lower() in ("false", "0", "no"):
                return False
            raise ValueError
        if tag == "str":
            if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
                return text[1:-1]
            return text
    except ValueError:
        raise ConfigError(f"key {key!r} expects a {tag}, got {text!r}") from None
    raise ConfigError(f"unhandled type tag {tag!r} for key {key!r}")


def parse_value(key: str, text: str):
    """Parse one raw value string against the schema."""
    if key not in SCHEMA:
        raise ConfigError(f"unknown configuration key {key!r}")
    tag, _ = SCHEMA[key]
    text = text.strip()
    if tag.endswith("_list"):
        inner = tag[: -len("_list")]
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        items = [t for t in (s.strip() for s in text.split(",")) if t]
        return [_parse_scalar(key, item, inner) for item in items]
    return _parse_scalar(key, text, tag)


def _parse_lines(text: str, source: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        values[key] = parse_value(key, val)
    return values


def parse_config(
    file_text: str | None = None,
    overrides: list | None = None,
    source: str = "<config>",
) -> RunConfig:
    """Assemble the effective configuration.

    Defaults are overlaid by the expanded preset, then by the config file,
    then by command-line overrides, in that order.
    """
    file_values = _parse_lines(file_text, source) if file_text else {}
    cli_values = {}
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key=value")
        key, _, val = item.partition("=")
        cli_values[key.strip()] = parse_value(key.strip(), val)
    preset_name = cli_values.get("preset", file_values.get("preset", ""))
    effective = {key: default for key, (_, default) in SCHEMA.items()}
    if preset_name:
        if preset_name not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset_name!r} (available: "
                f"{', '.join(sorted(PRESETS))})"
            )
        effective["preset"] = preset_name
        effective.update(PRESETS[preset_name])
    effective.update(file_values)
    effective.update(cli_values)
    command = effective["command"]
    if command and command not in COMMANDS:
        raise ConfigError(
            f"unknown command {command!r} (available: {', '.join(COMMANDS)})"
        )
    return RunConfig(effective)


def serialize_config(config: RunConfig) -> str:
    """Render the effective configuration in the same key = value format."""
    lines = []
    for key in sorted(config.values):
        tag, _ = SCHEMA[key]
        val = config.values[key]
        if tag == "str":
            rendered = f'"{val}"'
        elif tag == "bool":
            rendered = "true" if val else "false"
        elif tag.endswith("_list"):
            inner = []
            for item in val:
                inner.append(f'"{item}"' if tag == "str_list" else repr(item))
            rendered = "[" + ", ".join(inner) + "]"
        else:
            rendered = repr(val)
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    """Deterministic CSV cell rendering."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _make_run_dir(config: RunConfig) -> Path:
    base = Path(config["output_dir"])
    base.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    for suffix in range(1000):
        name = f"{config.command}-{stamp}"
        if suffix:
            name = f"{name}-{suffix}"
        run_dir = base / name
        try:
            run_dir.mkdir()
            return run_dir
        except FileExistsError:
            continue
    raise ConfigError(f"could not allocate a run directory under {base}")


def _write_provenance(run_dir: Path, config: RunConfig, seeds) -> None:
    (run_dir / "config.echo").write_text(serialize_config(config))
    (run_dir / "seeds.txt").write_text(
        "\n".join(str(s) for s in seeds) + ("\n" if len(seeds) else "")
    )


def _seed_list(config: RunConfig) -> list:
    return [config["seed0"] + i for i in range(config["n_trials"])]


def _matrix_to_csv(path: Path, matrix: np.ndarray) -> None:
    with path.open("w", newline="") as fh:
        for row in np.atleast_2d(matrix):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _matrix_from_csv(path: Path) -> np.ndarray:
    rows = []
    for line in path.read_text().splitlines():
        if line.strip():
            rows.append([float(v) for v in line.split(",")])
    return np.array(rows)


def _cmd_gen_data(config: RunConfig, run_dir: Path):
    if config["task"] == "seeing-double":
        ca, cb = seeing_double_pair(
            periods=config["train_periods"], step=config["step"]
        )
        ca.to_csv(run_dir / "circle_ccw.csv")
        cb.to_csv(run_dir / "circle_cw.csv")
        rows = [
            ("circle_ccw.csv", ca.samples, ca.dims),
            ("circle_cw.csv", cb.samples, cb.dims),
        ]
    else:
        pair = AttractorPairSpec(
            z_shift=config["dz"],
            horizon=config["horizon"],
            step=config["step"],
            transient_discard=config["transient"],
        )
        lorenz, halvorsen = make_attractor_pair(pair)
        lorenz.to_csv(run_dir / "lorenz.csv")
        halvorsen.to_csv(run_dir / "halvorsen.csv")
        rows = [
            ("lorenz.csv", lorenz.samples, lorenz.dims),
            ("halvorsen.csv", halvorsen.samples, halvorsen.dims),
        ]
    _write_csv(run_dir / "results.csv", ["file", "samples", "dims"], rows)
    return [config["seed0"]]


def _training_set(config: RunConfig):
    if config["task"] == "seeing-double":
        ca, cb = seeing_double_pair(
            periods=config["train_periods"], step=config["step"]
        )
        return MultifunctionalTrainingSet(ca, cb, "C_A", "C_B")
    pair = AttractorPairSpec(
        z_shift=config["dz"],
        horizon=config["horizon"],
        step=config["step"],
        transient_discard=config["transient"],
    )
    sig1, sig2 = make_attractor_pair(pair)
    return MultifunctionalTrainingSet(sig1, sig2, "lorenz", "halvorsen")


def _cmd_train(config: RunConfig, run_dir: Path):
    kind = ModelKind(config["kind"])
    seed = config["seed0"]
    ts = _training_set(config)
    if kind is ModelKind.NG:
        spec = ngrc_spec_from(config.values)
        i_train = min(ts.input_1.samples, ts.input_2.samples) - 1
        W_out = ngrc_train(spec, [ts.input_1, ts.input_2], i_train)
        write_readout_csv(run_dir / "W_out.csv", W_out, ts.input_1.dims, spec)
        depth = (spec.shifts - 1) * spec.stride + 1
        for name, series in (("history_1", ts.input_1), ("history_2", ts.input_2)):
            _matrix_to_csv(
                run_dir / f"{name}.csv",
                series.values[i_train - depth + 1 : i_train + 1],
            )
        meta = {
            "kind": kind.value,
            "dims": ts.input_1.dims,
            "i_train": i_train,
            "orders": list(spec.orders),
            "k": spec.shifts,
            "s": spec.stride,
            "beta": spec.regularization,
            "quadratic_readout": spec.use_quadratic_readout,
            "step": config["step"],
        }
        rows = [("W_out.csv", W_out.shape[0], W_out.shape[1])]
    else:
        spec = reservoir_spec_from(config.values, seed)
        trained = train_multifunctional(kind, spec, ts)
        _matrix_to_csv(run_dir / "M.csv", trained.model.adjacency)
        _matrix_to_csv(run_dir / "W_in.csv", trained.model.input_matrix)
        _matrix_to_csv(run_dir / "W_out.csv", trained.model.readout)
        _matrix_to_csv(
            run_dir / "end_states.csv",
            np.vstack([trained.end_state_1, trained.end_state_2]),
        )
        meta = {
            "kind": kind.value,
            "dims": ts.input_1.dims,
            "seed": seed,
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
        rows = [
            ("M.csv",) + trained.model.adjacency.shape,
            ("W_in.csv",) + trained.model.input_matrix.shape,
            ("W_out.csv",) + trained.model.readout.shape,
        ]
    (run_dir / "model.json").write_text(json.dumps(meta, sort_keys=True, indent=1))
    _write_csv(run_dir / "results.csv", ["file", "rows", "cols"], rows)
    return [seed]


def _cmd_predict(config: RunConfig, run_dir: Path):
    model_dir = Path(config["model_dir"])
    if not model_dir.is_dir():
        raise ConfigError(f"model_dir {model_dir} does not exist")
    meta = json.loads((model_dir / "model.json").read_text())
    kind = ModelKind(meta["kind"])
    rows = []
    if kind is ModelKind.NG:
        from .ngrc import NgrcSpec

        spec = NgrcSpec(
            orders=tuple(meta["orders"]),
            shifts=meta["k"],
            stride=meta["s"],
            regularization=meta["beta"],
            use_quadratic_readout=meta["quadratic_readout"],
        )
        # The NG readout CSV carries a header row of feature names.
        text = (model_dir / "W_out.csv").read_text().splitlines()
        W_out = np.array(
            [[float(v) for v in line.split(",")] for line in text[1:]]
        )
        steps = int(round(config["predict_periods"] * TWO_PI / meta["step"]))
        for idx in (1, 2):
            history = _matrix_from_csv(model_dir / f"history_{idx}.csv")
            series = ngrc_predict(spec, W_out, history, steps, step=meta["step"])
            series.to_csv(run_dir / f"prediction_{idx}.csv")
            outcome = classify_outcome(series)
            rows.append((f"prediction_{idx}.csv", outcome.outcome.value))
    else:
        spec = ReservoirSpec(
            n_neurons=meta["n_neurons"],
            connectivity=meta["connectivity"],
            spectral_radius_target=meta["rho"],
            input_strength=meta["sigma"],
            timescale=meta["gamma"],
            leak_rate=meta["alpha"],
            regularization=meta["beta"],
            step=meta["step"],
            listen_horizon=meta["listen_horizon"],
            train_horizon=meta["train_horizon"],
            seed=meta["seed"],
        )
        model = TrainedModel(
            kind,
            _matrix_from_csv(model_dir / "M.csv"),
            _matrix_from_csv(model_dir / "W_in.csv"),
            _matrix_from_csv(model_dir / "W_out.csv"),
            spec,
        )
        ends = _matrix_from_csv(model_dir / "end_states.csv")
        steps = int(round(config["predict_periods"] * TWO_PI / spec.step))
        predict = ct_predict if kind is ModelKind.CT else li_predict
        for idx in (1, 2):
            _, series = predict(model, ends[idx - 1], steps)
            series.to_csv(run_dir / f"prediction_{idx}.csv")
            outcome = classify_outcome(series)
            rows.append((f"prediction_{idx}.csv", outcome.outcome.value))
    _write_csv(run_dir / "results.csv", ["file", "outcome"], rows)
    return [config["seed0"]]


def _cmd_sweep_rho(config: RunConfig, run_dir: Path):
    kind = ModelKind(config["kind"])
    spec = reservoir_spec_from(config.values)
    result = sweep_rho(
        kind,
        spec,
        config["rho_values"],
        config["n_trials"],
        config["seed0"],
        workers=config["workers"],
    )
    result.to_csv(run_dir / "results.csv")
    result.to_long_csv(run_dir / "results_long.csv")
    result.to_jsonl(run_dir / "trials.jsonl")
    return list(result.seeds)


def _cmd_sweep_grid(config: RunConfig, run_dir: Path):
    kind = ModelKind(config["kind"])
    spec = reservoir_spec_from(config.values)
    beta_values = config["beta_values"] or list(
        np.logspace(-9, 2, 12)
    )
    if config["rate_values"]:
        rate_values = config["rate_values"]
    elif kind is ModelKind.CT:
        rate_values = list(np.linspace(1.0, 100.0, 10))
    else:
        rate_values = list(np.linspace(0.05, 1.0, 10))
    result = sweep_grid(
        kind,
        spec,
        beta_values,
        rate_values,
        config["n_trials"],
        config["seed0"],
        workers=config["workers"],
    )
    result.to_csv(run_dir / "results.csv")
    result.to_long_csv(run_dir / "results_long.csv")
    result.to_jsonl(run_dir / "trials.jsonl")
    return list(result.seeds)


def _cmd_ngrc_beta_sweep(config: RunConfig, run_dir: Path):
    spec = ngrc_spec_from(config.values)
    if config["beta_values"]:
        beta_values = config["beta_values"]
    else:
        beta_values = list(
            np.logspace(
                np.log10(config["beta_min"]),
                np.log10(config["beta_max"]),
                config["beta_points"],
            )
        )
    records = ngrc_beta_sweep(
        spec,
        beta_values,
        train_periods=config["train_periods"],
        predict_periods=config["predict_periods"],
        step=config["step"],
    )
    rows = [
        (r.beta, r.success, r.outcome_a, r.outcome_b) for r in records
    ]
    _write_csv(
        run_dir / "results.csv", ["beta", "success", "outcome_a", "outcome_b"], rows
    )
    names = feature_names(2, spec)
    weight_header = ["beta"] + [
        f"w[{i + 1},{j + 1}]({name})"
        for i in range(records[0].weights.shape[0])
        for j, name in enumerate(names)
    ]
    weight_rows = [
        [r.beta] + [v for row in r.weights for v in row] for r in records
    ]
    _write_csv(run_dir / "weights.csv", weight_header, weight_rows)
    with (run_dir / "trials.jsonl").open("w") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    return [config["seed0"]]


def _cmd_lorenz_halvorsen(config: RunConfig, run_dir: Path):
    kinds = [ModelKind(k) for k in config["kinds"]]
    seeds = _seed_list(config)
    specs = {}
    for kind in kinds:
        preset_key = {
            ModelKind.CT: "table1-fig1",
            ModelKind.LI: "table2-fig1",
            ModelKind.NG: "table3-fig1",
        }[kind]
        values = dict(config.values)
        if not config["preset"]:
            values.update(PRESETS[preset_key])
        specs[kind] = spec_for_kind(kind, values)
    pair = AttractorPairSpec(
        z_shift=0.0,
        horizon=config["horizon"],
        step=config["step"],
        transient_discard=config["transient"],
    )
    trials = lorenz_halvorsen_experiment(
        kinds,
        specs,
        config["dz_values"],
        seeds,
        workers=config["workers"],
        pair_spec=pair,
    )
    rows = [
        (t.kind, t.dz, t.seed, t.success, t.error or "") for t in trials
    ]
    _write_csv(
        run_dir / "results.csv", ["kind", "dz", "seed", "success", "error"], rows
    )
    with (run_dir / "trials.jsonl").open("w") as fh:
        for t in trials:
            fh.write(t.to_json() + "\n")
    return seeds


def _cmd_floquet(config: RunConfig, run_dir: Path):
    kind = ModelKind(config["kind"])
    if kind is ModelKind.NG:
        raise ConfigError("Floquet analysis applies to the ct and li kinds")
    spec = reservoir_spec_from(config.values)
    seeds = _seed_list(config)
    tasks = [
        (
            run_seeing_double_trial,
            dict(kind=kind, spec=spec, seed=seed, attach_floquet=True),
        )
        for seed in seeds
    ]
    reports = run_trials(tasks, config["workers"])
    rows = []
    for rep in reports:
        row = [rep.seed, rep.success]
        stable = None
        for spectrum in rep.floquet:
            mags = np.abs(spectrum.multipliers[:2])
            row.extend([mags[0], mags[1] if mags.size > 1 else 0.0])
            ok = floquet_stable(spectrum)
            stable = ok if stable is None else (stable and ok)
        row.append(bool(stable) if stable is not None else "")
        rows.append(tuple(row))
    _write_csv(
        run_dir / "results.csv",
        ["seed", "success", "lam1_A", "lam2_A", "lam1_B", "lam2_B", "stable"],
        rows,
    )
    with (run_dir / "trials.jsonl").open("w") as fh:
        for rep in reports:
            fh.write(rep.to_json() + "\n")
    return seeds


def _cmd_stm(config: RunConfig, run_dir: Path):
    kind = ModelKind(config["kind"])
    if kind is ModelKind.NG:
        raise ConfigError("the STM probe applies to the ct and li kinds")
    seeds = _seed_list(config)
    rows = []
    for seed in seeds:
        spec = reservoir_spec_from(config.values, seed)
        M, _ = build_reservoir(spec, 2)
        cfg = StmConfig(
            max_shift=config["stm_max_shift"],
            signal_length=config["stm_signal_length"],
            washout=config["stm_washout"],
            regularization=config["stm_beta"],
            seed=seed,
        )
        result = stm(M, spec, cfg, kind=kind)
        rows.append((seed, result.total))
    _write_csv(run_dir / "results.csv", ["seed", "stm"], rows)
    return seeds


_DISPATCH = {
    "gen-data": _cmd_gen_data,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "sweep-rho": _cmd_sweep_rho,
    "sweep-grid": _cmd_sweep_grid,
    "ngrc-beta-sweep": _cmd_ngrc_beta_sweep,
    "lorenz-halvorsen": _cmd_lorenz_halvorsen,
    "floquet": _cmd_floquet,
    "stm": _cmd_stm,
}


def execute(config: RunConfig) -> int:
    """Run one command and write its artifacts; returns the exit status."""
    if not config.command:
        print("no command given", file=sys.stderr)
        return 2
    run_dir = _make_run_dir(config)
    try:
        seeds = _DISPATCH[config.command](config, run_dir)
    except (MultireservoirError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        (run_dir / "error.txt").write_text(f"{type(exc).__name__}: {exc}\n")
        return 1
    _write_provenance(run_dir, config, seeds)
    print(run_dir)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="multireservoir",
        description=(
            "Train and analyze multifunctional reservoir computers "
            "(continuous-time, leaky-integrator, next-generation)."
        ),
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument(
        "--preset",
        help="named hyperparameter preset (e.g. table1-fig3)",
    )
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one configuration key (repeatable)",
    )
    parser.add_argument("--out", help="output directory (default: runs)")
    parser.add_argument("--seed", type=int, help="base seed (seed0)")
    parser.add_argument("--trials", type=int, help="number of trials per cell")
    parser.add_argument("--workers", type=int, help="parallel trial workers")
    args = parser.parse_args(argv)

    overrides = list(args.set)
    if args.preset:
        overrides.insert(0, f"preset={args.preset}")
    if args.out:
        overrides.append(f"output_dir={args.out}")
    if args.seed is not None:
        overrides.append(f"seed0={args.seed}")
    if args.trials is not None:
        overrides.append(f"n_trials={args.trials}")
    if args.workers is not None:
        overrides.append(f"workers={args.workers}")
    overrides.append(f"command={args.command}")
    try:
        file_text = None
        source = "<cli>"
        if args.config:
            file_text = Path(args.config).read_text()
            source = args.config
        config = parse_config(file_text, overrides, source)
        return execute(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
