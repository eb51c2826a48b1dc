"""Continuous-time and leaky-integrator reservoir computers.

Both variants share the same random architecture: a sparse random adjacency
matrix rescaled to a target spectral radius, and an input matrix with one
nonzero entry per row.  The continuous-time reservoir integrates a tanh
rate equation with RK4; the leaky-integrator reservoir iterates the
corresponding discrete map.  Training fits a linear readout on the
quadratic state expansion [r; r^2] by ridge regression (see
:mod:`multireservoir.experiments` for the two-task concatenation).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateMatrix, Divergence
from .numerics import scale_to_spectral_radius
from .rng import ROLE_ADJACENCY, ROLE_INPUT_MATRIX, Xoshiro256StarStar
from .tasks import TimeSeries

#: Predictions whose state norm exceeds this are declared divergent.
DIVERGENCE_NORM = 1e6


class ModelKind(str, enum.Enum):
    CT = "ct"
    LI = "li"
    NG = "ng"


@dataclass(frozen=True)
class ReservoirSpec:
    """Scalar hyperparameters and seed for one CT/LI reservoir trial.

    `timescale` (gamma) applies to the continuous-time variant only and
    `leak_rate` (alpha) to the leaky-integrator variant only; both are kept
    so one spec can parameterize either kind in comparative sweeps.
    Horizons are in time units and realized on the sample grid by rounding.
    """

    n_neurons: int = 500
    connectivity: float = 0.05
    spectral_radius_target: float = 1.4
    input_strength: float = 0.2
    timescale: float = 5.0
    leak_rate: float = 0.05
    regularization: float = 1e-2
    step: float = 0.01
    listen_horizon: float = 6.0 * 2.0 * np.pi
    train_horizon: float = 15.0 * 2.0 * np.pi
    seed: int = 0

    def __post_init__(self):
        if self.n_neurons < 1:
            raise ValueError("n_neurons must be at least 1")
        if not 0.0 < self.connectivity <= 1.0:
            raise ValueError("connectivity must lie in (0, 1]")
        if not 0.0 <= self.leak_rate <= 1.0:
            raise ValueError("leak_rate must lie in [0, 1]")
        if self.spectral_radius_target <= 0:
            raise ValueError("spectral_radius_target must be positive")
        if self.timescale <= 0:
            raise ValueError("timescale must be positive")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if not 0.0 < self.listen_horizon < self.train_horizon:
            raise ValueError("need 0 < listen_horizon < train_horizon")
        if self.regularization < 0:
            raise ValueError("regularization must be nonnegative")

    @property
    def listen_index(self) -> int:
        return int(round(self.listen_horizon / self.step))

    @property
    def train_index(self) -> int:
        return int(round(self.train_horizon / self.step))

    def with_seed(self, seed: int) -> "ReservoirSpec":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class TrainedModel:
    """A trained closed-loop reservoir: fixed matrices plus the readout."""

    kind: ModelKind
    adjacency: np.ndarray
    input_matrix: np.ndarray
    readout: np.ndarray
    spec: ReservoirSpec

    @property
    def feedback_matrix(self) -> np.ndarray:
        """sigma * W_in @ W_out, the (N, 2N) closed-loop coupling."""
        return self.spec.input_strength * (self.input_matrix @ self.readout)


def generate_adjacency(n: int, p: float, rho: float, seed: int) -> np.ndarray:
    """Sparse random adjacency: each entry independently nonzero with
    probability `p`, value uniform on (-1, 1), rescaled to spectral radius
    `rho`.  Deterministic for a fixed seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    rng = Xoshiro256StarStar(seed, ROLE_ADJACENCY)
    u = rng.uniforms(2 * n * n)
    mask = u[: n * n].reshape(n, n) < p
    values = 2.0 * u[n * n :].reshape(n, n) - 1.0
    raw = np.where(mask, values, 0.0)
    if not raw.any():
        raise DegenerateMatrix("adjacency draw produced an all-zero matrix")
    return scale_to_spectral_radius(raw, rho)


def generate_input_matrix(
    n: int, d: int, seed: int, role: int = ROLE_INPUT_MATRIX
) -> np.ndarray:
    """Input matrix with exactly one nonzero per row: the column is chosen
    uniformly from the `d` inputs, the value uniformly from (-1, 1).

    `role` selects the RNG stream; the memory-capacity probe passes its own
    role so its input matrix differs from the prediction model's.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be at least 1")
    rng = Xoshiro256StarStar(seed, role)
    cols = rng.integers(n, d)
    values = rng.symmetric_uniforms(n)
    w = np.zeros((n, d))
    w[np.arange(n), cols] = values
    return w


def build_reservoir(spec: ReservoirSpec, d: int, retries: int = 8):
    """Generate (M, W_in) for a trial, retrying degenerate adjacency draws
    with sub-seeds seed+1, seed+2, ... up to `retries` times."""
    last_error = None
    for attempt in range(retries + 1):
        try:
            M = generate_adjacency(
                spec.n_neurons,
                spec.connectivity,
                spec.spectral_radius_target,
                spec.seed + attempt,
            )
            break
        except DegenerateMatrix as exc:
            last_error = exc
    else:
        raise DegenerateMatrix(
            f"no usable adjacency in {retries + 1} attempts from seed {spec.seed}"
        ) from last_error
    W_in = generate_input_matrix(spec.n_neurons, d, spec.seed)
    return M, W_in


def quadratic_readout(r: np.ndarray) -> np.ndarray:
    """State expansion q(r) = [r; r^2] used as regression features."""
    return np.concatenate([r, r * r])


def quadratic_readout_block(states: np.ndarray) -> np.ndarray:
    """q applied to each row of an (L, N) state block, returned as (2N, L)."""
    return np.vstack([states.T, (states * states).T])


def _check_input(spec: ReservoirSpec, inp: TimeSeries) -> None:
    if abs(inp.step - spec.step) > 1e-12:
        raise ValueError(
            f"input step {inp.step} does not match reservoir step {spec.step}"
        )
    if inp.samples <= spec.train_index:
        raise ValueError(
            f"input provides {inp.samples} samples but training needs "
            f"{spec.train_index + 1}"
        )


def ct_drive(
    M: np.ndarray,
    W_in: np.ndarray,
    sigma: float,
    gamma: float,
    tau: float,
    inputs: np.ndarray,
    steps: int | None = None,
    r0: np.ndarray | None = None,
    method: str = "rk4",
) -> np.ndarray:
    """Integrate the driven continuous-time reservoir over `steps` steps.

    `inputs` is the (L, D) sample array; each integration step holds the
    input constant at its value for the step's start index (zero-order
    hold, matching the shared sampling grid).  Returns all states,
    shape (steps + 1, N).

    `method` is "rk4" (default) or "euler"; the forward-Euler variant
    exists to exhibit the exact algebraic correspondence with the
    leaky-integrator map at alpha = gamma * tau and shares its arithmetic.
    """
    n = M.shape[0]
    if steps is None:
        steps = inputs.shape[0] - 1
    r = np.zeros(n) if r0 is None else np.asarray(r0, dtype=np.float64)
    states = np.empty((steps + 1, n))
    states[0] = r
    if method == "rk4":
        for i in range(steps):
            drive = sigma * (W_in @ inputs[i])

            def field(r_):
                return gamma * (-r_ + np.tanh(M @ r_ + drive))

            k1 = field(r)
            k2 = field(r + (0.5 * tau) * k1)
            k3 = field(r + (0.5 * tau) * k2)
            k4 = field(r + tau * k3)
            r = r + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(r)):
                raise Divergence(i + 1)
            states[i + 1] = r
    elif method == "euler":
        a = gamma * tau
        for i in range(steps):
            pre = M @ r + sigma * (W_in @ inputs[i])
            r = (1.0 - a) * r + a * np.tanh(pre)
            states[i + 1] = r
    else:
        raise ValueError(f"unknown integration method {method!r}")
    return states


def li_drive(
    M: np.ndarray,
    W_in: np.ndarray,
    sigma: float,
    alpha: float,
    inputs: np.ndarray,
    steps: int | None = None,
    r0: np.ndarray | None = None,
) -> np.ndarray:
    """Iterate the driven leaky-integrator map; returns (steps + 1, N) states."""
    n = M.shape[0]
    if steps is None:
        steps = inputs.shape[0] - 1
    r = np.zeros(n) if r0 is None else np.asarray(r0, dtype=np.float64)
    states = np.empty((steps + 1, n))
    states[0] = r
    for i in range(steps):
        pre = M @ r + sigma * (W_in @ inputs[i])
        r = (1.0 - alpha) * r + alpha * np.tanh(pre)
        states[i + 1] = r
    return states


def ct_listen(
    spec: ReservoirSpec,
    M: np.ndarray,
    W_in: np.ndarray,
    inp: TimeSeries,
    method: str = "rk4",
):
    """Drive the continuous-time reservoir from r(0) = 0 with an input signal.

    Returns the state trajectory (train_index + 1, N) and the feature
    matrix X = q(r) collected over the closed window
    [listen_horizon, train_horizon].
    """
    _check_input(spec, inp)
    states = ct_drive(
        M,
        W_in,
        spec.input_strength,
        spec.timescale,
        spec.step,
        inp.values,
        steps=spec.train_index,
        method=method,
    )
    window = states[spec.listen_index : spec.train_index + 1]
    return states, quadratic_readout_block(window)


def li_listen(spec: ReservoirSpec, M: np.ndarray, W_in: np.ndarray, inp: TimeSeries):
    """Drive the leaky-integrator reservoir from r[0] = 0.

    Returns the state trajectory and X = q(r) over [listen_index, train_index].
    """
    _check_input(spec, inp)
    states = li_drive(
        M,
        W_in,
        spec.input_strength,
        spec.leak_rate,
        inp.values,
        steps=spec.train_index,
    )
    window = states[spec.listen_index : spec.train_index + 1]
    return states, quadratic_readout_block(window)


def ct_predict(model: TrainedModel, r0: np.ndarray, steps: int):
    """Run the trained continuous-time reservoir closed loop for `steps` steps.

    The readout output replaces the external input; returns the state
    trajectory and the predicted output series W_out q(r) at every step.
    """
    if model.kind is not ModelKind.CT:
        raise ValueError(f"expected a CT model, got {model.kind}")
    spec = model.spec
    gamma = spec.timescale
    tau = spec.step
    M = model.adjacency
    B = model.feedback_matrix
    W_out = model.readout

    def field(r_):
        return gamma * (-r_ + np.tanh(M @ r_ + B @ quadratic_readout(r_)))

    r = np.asarray(r0, dtype=np.float64)
    states = np.empty((steps + 1, r.size))
    states[0] = r
    for i in range(steps):
        k1 = field(r)
        k2 = field(r + (0.5 * tau) * k1)
        k3 = field(r + (0.5 * tau) * k2)
        k4 = field(r + tau * k3)
        r = r + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(r)) or np.abs(r).max() > DIVERGENCE_NORM:
            raise Divergence(i + 1)
        states[i + 1] = r
    outputs = (W_out @ quadratic_readout_block(states)).T
    return states, TimeSeries(outputs, tau)


def li_predict(model: TrainedModel, r0: np.ndarray, steps: int):
    """Run the trained leaky-integrator reservoir closed loop."""
    if model.kind is not ModelKind.LI:
        raise ValueError(f"expected an LI model, got {model.kind}")
    spec = model.spec
    a = spec.leak_rate
    M = model.adjacency
    B = model.feedback_matrix
    r = np.asarray(r0, dtype=np.float64)
    states = np.empty((steps + 1, r.size))
    states[0] = r
    for i in range(steps):
        pre = M @ r + B @ quadratic_readout(r)
        r = (1.0 - a) * r + a * np.tanh(pre)
        if not np.all(np.isfinite(r)) or np.abs(r).max() > DIVERGENCE_NORM:
            raise Divergence(i + 1)
        states[i + 1] = r
    outputs = (model.readout @ quadratic_readout_block(states)).T
    return states, TimeSeries(outputs, spec.step)


def _ct_jacobian_cached(
    gamma: float, M: np.ndarray, B1: np.ndarray, B2: np.ndarray, r: np.ndarray
) -> np.ndarray:
    """ct_jacobian body with the feedback blocks precomputed (hot path)."""
    n = M.shape[0]
    a = M @ r + B1 @ r + B2 @ (r * r)
    s = 1.0 - np.tanh(a) ** 2
    inner = M + B1 + 2.0 * B2 * r[np.newaxis, :]
    J = s[:, np.newaxis] * inner
    J[np.arange(n), np.arange(n)] -= 1.0
    return gamma * J


def ct_jacobian(model: TrainedModel, r: np.ndarray) -> np.ndarray:
    """Jacobian of the closed-loop continuous-time vector field at state r.

    With a = M r + B q(r) and B = sigma W_in W_out, the derivative of the
    feedback term through q splits into the linear block B1 and the
    elementwise-square block B2 column-scaled by 2r:

        J = gamma [ -I + diag(1 - tanh(a)^2) (M + B1 + 2 B2 diag(r)) ]
    """
    if model.kind is not ModelKind.CT:
        raise ValueError(f"expected a CT model, got {model.kind}")
    n = model.spec.n_neurons
    B = model.feedback_matrix
    return _ct_jacobian_cached(
        model.spec.timescale,
        model.adjacency,
        B[:, :n],
        B[:, n:],
        np.asarray(r, dtype=np.float64),
    )


def _li_jacobian_cached(
    alpha: float, M: np.ndarray, B1: np.ndarray, B2: np.ndarray, r: np.ndarray
) -> np.ndarray:
    """li_jacobian body with the feedback blocks precomputed (hot path)."""
    n = M.shape[0]
    a = M @ r + B1 @ r + B2 @ (r * r)
    s = 1.0 - np.tanh(a) ** 2
    J = alpha * (s[:, np.newaxis] * (M + B1 + 2.0 * B2 * r[np.newaxis, :]))
    J[np.arange(n), np.arange(n)] += 1.0 - alpha
    return J


def li_jacobian(model: TrainedModel, r: np.ndarray) -> np.ndarray:
    """Jacobian of the closed-loop leaky-integrator map at state r."""
    if model.kind is not ModelKind.LI:
        raise ValueError(f"expected an LI model, got {model.kind}")
    n = model.spec.n_neurons
    B = model.feedback_matrix
    return _li_jacobian_cached(
        model.spec.leak_rate,
        model.adjacency,
        B[:, :n],
        B[:, n:],
        np.asarray(r, dtype=np.float64),
    )
