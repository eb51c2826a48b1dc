"""Dense linear algebra and ODE integration kernels.

Everything downstream (reservoir simulation, training, Floquet analysis)
builds on the operations here: a ridge regression solver, a self-contained
nonsymmetric eigensolver, spectral-radius rescaling, and a classical RK4
stepper with support for a shortened final step so that horizons like one
circle period (2*pi) can be hit exactly.

All functions are pure: they never mutate their inputs and hold no state,
so they are safe to call concurrently from independent trial workers.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DegenerateMatrix,
    DimensionError,
    Divergence,
    NumericalFailure,
    SingularSystem,
)

Field = Callable[[float, np.ndarray], np.ndarray]


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError(f"{name} contains non-finite entries")
    return a


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = _as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def ridge_solve(X, Y, beta: float) -> np.ndarray:
    """Solve the ridge regression W = Y X^T (X X^T + beta I)^(-1).

    `X` is (F, L) features-by-samples, `Y` is (D, L) targets-by-samples.
    The normal equations are solved by Cholesky factorization of the
    regularized Gram matrix, falling back to a pivoted LU solve when the
    factorization fails; no explicit inverse is ever formed.  With
    ``beta == 0`` a singular Gram matrix raises :class:`SingularSystem`.
    """
    X = _as_matrix(X, "X")
    Y = _as_matrix(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(
            f"X and Y must share sample count, got {X.shape[1]} != {Y.shape[1]}"
        )
    if X.shape[1] < 1:
        raise DimensionError("need at least one sample column")
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    gram = X @ X.T
    idx = np.arange(gram.shape[0])
    gram[idx, idx] += beta
    rhs = X @ Y.T  # (F, D)
    try:
        chol = np.linalg.cholesky(gram)
        sol = np.ascontiguousarray(rhs)
        _kernels.solve_lower_inplace(chol, sol)
        _kernels.solve_lower_transpose_inplace(chol, sol)
    except np.linalg.LinAlgError:
        try:
            sol = np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(
                "Gram matrix is singular and beta = 0 provides no regularization"
            ) from exc
        if beta == 0.0:
            residual = np.linalg.norm(gram @ sol - rhs)
            scale = np.linalg.norm(gram) * np.linalg.norm(sol) + np.linalg.norm(rhs)
            if not np.isfinite(residual) or residual > 1e-8 * max(scale, 1.0):
                raise SingularSystem(
                    "Gram matrix is numerically singular with beta = 0"
                )
    return sol.T


def eigenvalues(A) -> np.ndarray:
    """Full complex spectrum of a square matrix, sorted by descending magnitude.

    Uses the in-repo Hessenberg + Francis double-shift QR iteration; ties in
    magnitude are broken by descending real part, then descending imaginary
    part, so the ordering is deterministic.
    """
    A = _as_square(A)
    n = A.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    h = np.ascontiguousarray(A, dtype=np.float64).copy()
    _kernels.balance_inplace(h)
    _kernels.hessenberg_inplace(h)
    wr = np.empty(n, dtype=np.float64)
    wi = np.empty(n, dtype=np.float64)
    flag = _kernels.hqr_eigvals(h, wr, wi)
    if flag != 0:
        raise NumericalFailure(
            f"QR iteration failed to converge for a {n}x{n} matrix "
            f"(norm {np.abs(A).sum():.3e})"
        )
    vals = wr + 1j * wi
    order = np.lexsort((-vals.imag, -vals.real, -np.abs(vals)))
    return vals[order]


def spectral_radius(A) -> float:
    """Largest eigenvalue magnitude of a square matrix."""
    vals = eigenvalues(A)
    if vals.size == 0:
        return 0.0
    return float(np.abs(vals[0]))


def scale_to_spectral_radius(A, rho: float) -> np.ndarray:
    """Rescale a matrix so its spectral radius equals `rho`."""
    A = _as_square(A)
    if rho <= 0:
        raise ValueError(f"target spectral radius must be positive, got {rho}")
    current = spectral_radius(A)
    if current == 0.0:
        raise DegenerateMatrix(
            "matrix has zero spectral radius and cannot be rescaled"
        )
    return A * (rho / current)


def rk4_step(field: Field, t: float, state: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of size `h`."""
    k1 = field(t, state)
    k2 = field(t + 0.5 * h, state + (0.5 * h) * k1)
    k3 = field(t + 0.5 * h, state + (0.5 * h) * k2)
    k4 = field(t + h, state + h * k3)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_integrate(
    field: Field, state0, t0: float, steps: int, tau: float
) -> np.ndarray:
    """Integrate `field` for `steps` RK4 steps of size `tau`.

    Returns the (steps + 1, dim) array of states at t0 + n*tau.  A
    non-finite state raises :class:`Divergence` carrying the step index.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    state = np.asarray(state0, dtype=np.float64)
    out = np.empty((steps + 1, state.size), dtype=np.float64)
    out[0] = state
    t = t0
    for n in range(steps):
        state = rk4_step(field, t, state, tau)
        if not np.all(np.isfinite(state)):
            raise Divergence(n + 1)
        out[n + 1] = state
        t = t0 + (n + 1) * tau
    return out


def split_horizon(horizon: float, tau: float) -> tuple[int, float]:
    """Number of full tau steps in `horizon` plus the fractional remainder.

    The remainder is zero when the horizon is an integer multiple of tau
    (up to rounding slack), otherwise one shortened final step covers it.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be nonnegative, got {horizon}")
    nfull = int(np.floor(horizon / tau + 1e-9))
    h_last = horizon - nfull * tau
    if h_last < 1e-12 * tau:
        h_last = 0.0
    return nfull, h_last


def rk4_integrate_horizon(
    field: Field, state0, t0: float, horizon: float, tau: float
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate over [t0, t0 + horizon], shortening the last step if needed.

    Returns (states, times); the final time equals t0 + horizon exactly.
    """
    nfull, h_last = split_horizon(horizon, tau)
    states = rk4_integrate(field, state0, t0, nfull, tau)
    times = t0 + tau * np.arange(nfull + 1)
    if h_last > 0.0:
        tail = rk4_step(field, times[-1], states[-1], h_last)
        if not np.all(np.isfinite(tail)):
            raise Divergence(nfull + 1)
        states = np.vstack([states, tail])
        times = np.append(times, t0 + horizon)
    return states, times


def variational_rk4(
    jacobian_provider: Callable[[int, float], np.ndarray],
    step_sizes: Sequence[float],
    dim: int,
    t0: float = 0.0,
    overflow_norm: float = 1e12,
) -> tuple[np.ndarray, bool]:
    """Propagate Q' = J(t) Q with Q(0) = I along a prescribed step sequence.

    ``jacobian_provider(step_index, stage_time)`` supplies the coefficient
    matrix for each RK4 stage; providers are free to ignore `stage_time`
    and return one matrix per step (zero-order hold).  Returns the final Q
    and an overflow flag set when ||Q|| exceeded `overflow_norm` (the
    propagation stops there and the partial product is returned).
    """
    Q = np.eye(dim)
    t = t0
    for n, h in enumerate(step_sizes):
        j1 = jacobian_provider(n, t)
        j2 = jacobian_provider(n, t + 0.5 * h)
        j4 = jacobian_provider(n, t + h)
        k1 = j1 @ Q
        k2 = j2 @ (Q + (0.5 * h) * k1)
        k3 = j2 @ (Q + (0.5 * h) * k2)
        k4 = j4 @ (Q + h * k3)
        Q = Q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
        norm = np.abs(Q).max()
        if not np.isfinite(norm) or norm > overflow_norm:
            return Q, True
    return Q, False
