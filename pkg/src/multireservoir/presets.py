"""Named training presets.

Each preset pins the full hyperparameter row used for one experiment
family; sweep commands override the swept entries.  Horizons quoted in
circle periods are stored as time values (multiples of 2*pi).
"""

from __future__ import annotations

from .ngrc import NgrcSpec
from .reservoir import ModelKind, ReservoirSpec
from .tasks import TWO_PI

#: Regularization for the circle task NG-RC preset; chosen from inside the
#: empirically determined success window of the beta sweep.
NGRC_CIRCLES_BETA = 1e-4

PRESETS = {
    # Lorenz/Halvorsen reconstruction presets.
    "table1-fig1": {
        "kind": "ct",
        "n_neurons": 1000,
        "connectivity": 0.05,
        "rho": 1.6,
        "sigma": 5.0,
        "gamma": 7.0,
        "beta": 1e2,
        "listen_horizon": 100.0,
        "train_horizon": 200.0,
    },
    "table2-fig1": {
        "kind": "li",
        "n_neurons": 1000,
        "connectivity": 0.012,
        "rho": 0.9,
        "sigma": 1.2,
        "alpha": 0.2,
        "beta": 1e-3,
        "listen_horizon": 100.0,
        "train_horizon": 200.0,
    },
    "table3-fig1": {
        "kind": "ng",
        "orders": [1, 2, 3, 4, 5],
        "k": 3,
        "s": 2,
        "beta": 3e-5,
        "quadratic_readout": True,
    },
    # Seeing-double presets (rho and alpha/gamma entries marked "Fig" in the
    # source tables default to the values the sweeps center on).
    "table1-fig3": {
        "kind": "ct",
        "n_neurons": 500,
        "connectivity": 0.05,
        "rho": 1.4,
        "sigma": 0.2,
        "gamma": 5.0,
        "beta": 1e-2,
        "listen_horizon": 6.0 * TWO_PI,
        "train_horizon": 15.0 * TWO_PI,
    },
    "table1-fig4": {
        "kind": "ct",
        "n_neurons": 500,
        "connectivity": 0.05,
        "rho": 1.4,
        "sigma": 0.2,
        "gamma": 5.0,
        "beta": 1e-2,
        "listen_horizon": 6.0 * TWO_PI,
        "train_horizon": 15.0 * TWO_PI,
    },
    "table2-fig2": {
        "kind": "li",
        "n_neurons": 500,
        "connectivity": 0.05,
        "rho": 1.4,
        "sigma": 0.2,
        "alpha": 0.05,
        "beta": 1e-2,
        "listen_horizon": 6.0 * TWO_PI,
        "train_horizon": 15.0 * TWO_PI,
    },
    "table2-fig4": {
        "kind": "li",
        "n_neurons": 500,
        "connectivity": 0.05,
        "rho": 1.4,
        "sigma": 0.2,
        "alpha": 0.05,
        "beta": 1e-2,
        "listen_horizon": 6.0 * TWO_PI,
        "train_horizon": 15.0 * TWO_PI,
    },
    "table3-fig5": {
        "kind": "ng",
        "orders": [1, 2],
        "k": 2,
        "s": 1,
        "beta": NGRC_CIRCLES_BETA,
        "quadratic_readout": False,
    },
}


def reservoir_spec_from(values: dict, seed: int = 0) -> ReservoirSpec:
    """Build a reservoir spec from effective config values."""
    return ReservoirSpec(
        n_neurons=values["n_neurons"],
        connectivity=values["connectivity"],
        spectral_radius_target=values["rho"],
        input_strength=values["sigma"],
        timescale=values["gamma"],
        leak_rate=values["alpha"],
        regularization=values["beta"],
        step=values["step"],
        listen_horizon=values["listen_horizon"],
        train_horizon=values["train_horizon"],
        seed=seed,
    )


def ngrc_spec_from(values: dict) -> NgrcSpec:
    """Build an NG spec from effective config values."""
    return NgrcSpec(
        orders=tuple(values["orders"]),
        shifts=values["k"],
        stride=values["s"],
        regularization=values["beta"],
        use_quadratic_readout=values["quadratic_readout"],
    )


def spec_for_kind(kind: ModelKind, values: dict, seed: int = 0):
    if ModelKind(kind) is ModelKind.NG:
        return ngrc_spec_from(values)
    return reservoir_spec_from(values, seed)
