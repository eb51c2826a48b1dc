"""Linear algebra and integration kernels against independent oracles."""

import numpy as np
import pytest

from multireservoir.errors import (
    DegenerateMatrix,
    DimensionError,
    Divergence,
    SingularSystem,
)
from multireservoir.numerics import (
    eigenvalues,
    ridge_solve,
    rk4_integrate,
    rk4_integrate_horizon,
    scale_to_spectral_radius,
    spectral_radius,
    split_horizon,
    variational_rk4,
)

from conftest import cubic_roots_oracle, ridge_gd_oracle


class TestRidgeSolve:
    def test_identity_beta_zero(self):
        W = ridge_solve(np.eye(2), np.eye(2), 0.0)
        assert np.allclose(W, np.eye(2), atol=1e-12)

    def test_identity_beta_one(self):
        W = ridge_solve(np.eye(2), np.eye(2), 1.0)
        assert np.allclose(W, 0.5 * np.eye(2), atol=1e-12)

    def test_matches_gradient_descent_oracle(self, rng):
        X = rng.standard_normal((4, 20))
        Y = rng.standard_normal((2, 20))
        W = ridge_solve(X, Y, 0.1)
        W_gd = ridge_gd_oracle(X, Y, 0.1)
        assert np.abs(W - W_gd).max() <= 1e-8

    def test_normal_equations_residual(self, rng):
        for _ in range(10):
            F, D, L = rng.integers(2, 12), rng.integers(1, 4), rng.integers(5, 60)
            beta = float(10.0 ** rng.uniform(-6, 0))
            X = rng.standard_normal((F, L))
            Y = rng.standard_normal((D, L))
            W = ridge_solve(X, Y, beta)
            lhs = W @ (X @ X.T + beta * np.eye(F))
            rhs = Y @ X.T
            scale = np.abs(rhs).max() + np.abs(lhs).max()
            assert np.abs(lhs - rhs).max() <= 1e-9 * max(scale, 1.0)

    def test_singular_with_zero_beta(self):
        X = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularSystem):
            ridge_solve(X, np.eye(2), 0.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            ridge_solve(np.ones((2, 3)), np.ones((2, 4)), 0.1)

    def test_negative_beta_rejected(self):
        with pytest.raises(ValueError):
            ridge_solve(np.eye(2), np.eye(2), -1.0)


class TestSpectralRadius:
    def test_diagonal(self):
        assert spectral_radius(np.diag([3.0, -1.0])) == pytest.approx(3.0)

    def test_rotation(self):
        A = np.array([[0.0, -1.0], [1.0, 0.0]])
        assert spectral_radius(A) == pytest.approx(1.0)

    def test_random_cubic_oracle(self, rng):
        for _ in range(20):
            A = rng.standard_normal((3, 3))
            a = -float(np.trace(A))
            minors = (
                A[0, 0] * A[1, 1]
                - A[0, 1] * A[1, 0]
                + A[0, 0] * A[2, 2]
                - A[0, 2] * A[2, 0]
                + A[1, 1] * A[2, 2]
                - A[1, 2] * A[2, 1]
            )
            c = -float(np.linalg.det(A))
            roots = cubic_roots_oracle(a, float(minors), c)
            expected = max(abs(r) for r in roots)
            assert spectral_radius(A) == pytest.approx(expected, abs=1e-8)

    def test_non_square(self):
        with pytest.raises(DimensionError):
            spectral_radius(np.ones((2, 3)))


class TestScaleToSpectralRadius:
    def test_diagonal_scaling(self):
        scaled = scale_to_spectral_radius(np.diag([2.0, 1.0]), 1.0)
        assert np.allclose(scaled, np.diag([1.0, 0.5]))

    def test_zero_matrix_degenerate(self):
        with pytest.raises(DegenerateMatrix):
            scale_to_spectral_radius(np.zeros((3, 3)), 1.4)

    def test_random_scaled_radius(self, rng):
        A = rng.standard_normal((20, 20))
        scaled = scale_to_spectral_radius(A, 1.4)
        assert spectral_radius(scaled) == pytest.approx(1.4, rel=1e-6)

    def test_idempotent(self, rng):
        A = rng.standard_normal((12, 12))
        once = scale_to_spectral_radius(A, 1.4)
        twice = scale_to_spectral_radius(once, 1.4)
        assert np.abs(once - twice).max() <= 1e-12


class TestRk4:
    def test_zero_field(self):
        states = rk4_integrate(lambda t, x: np.zeros_like(x), [1.0, -2.0], 0.0, 7, 0.01)
        assert np.allclose(states, [1.0, -2.0])

    def test_exponential_single_step(self):
        states = rk4_integrate(lambda t, x: -x, [1.0], 0.0, 1, 0.01)
        assert states[-1, 0] == pytest.approx(np.exp(-0.01), abs=1e-10)

    def test_rotation_full_period(self):
        field = lambda t, x: np.array([-x[1], x[0]])
        states, times = rk4_integrate_horizon(field, [1.0, 0.0], 0.0, 2 * np.pi, 0.01)
        assert times[-1] == pytest.approx(2 * np.pi, abs=1e-12)
        assert np.abs(states[-1] - [1.0, 0.0]).max() <= 1e-6

    def test_divergence_carries_step_index(self):
        # Doubling field overflows exp-fast; the step index is reported.
        field = lambda t, x: x * 200.0
        with pytest.raises(Divergence) as err:
            rk4_integrate(field, [1e300], 0.0, 50, 1.0)
        assert err.value.step >= 1

    def test_fourth_order_convergence(self):
        # Halving tau must cut the global exponential error ~16x (>= 14x).
        def run(tau):
            states = rk4_integrate(lambda t, x: -x, [1.0], 0.0, 100, tau)
            return abs(states[-1, 0] - np.exp(-100 * tau))

        err_h = run(0.05)
        err_h2 = rk4_integrate(lambda t, x: -x, [1.0], 0.0, 200, 0.025)
        err_h2 = abs(err_h2[-1, 0] - np.exp(-100 * 0.05))
        assert err_h / err_h2 >= 14.0

    def test_split_horizon(self):
        nfull, rem = split_horizon(2 * np.pi, 0.01)
        assert nfull == 628
        assert rem == pytest.approx(2 * np.pi - 6.28)
        nfull, rem = split_horizon(1.0, 0.01)
        assert nfull == 100 and rem == 0.0


class TestEigenvalues:
    def test_identity(self):
        vals = eigenvalues(np.eye(3))
        assert np.allclose(vals, [1.0, 1.0, 1.0])

    def test_rotation_pair(self):
        vals = eigenvalues(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert np.allclose(sorted(v.imag for v in vals), [-1.0, 1.0], atol=1e-12)
        assert np.allclose([v.real for v in vals], 0.0, atol=1e-12)

    def test_companion_near_unit_pair(self):
        # z^2 - 1.9999 z + 1: complex pair on the unit circle.
        C = np.array([[1.9999, -1.0], [1.0, 0.0]])
        vals = eigenvalues(C)
        disc = 1.9999**2 - 4.0
        assert disc < 0
        root = (1.9999 + 1j * np.sqrt(-disc)) / 2.0
        assert np.abs(vals[0] - root) <= 1e-8 or np.abs(vals[0] - root.conjugate()) <= 1e-8
        assert np.abs(np.abs(vals) - 1.0).max() <= 1e-8

    def test_transpose_multiset(self, rng):
        for n in (2, 5, 11, 30):
            A = rng.standard_normal((n, n))
            a = np.sort_complex(eigenvalues(A))
            b = np.sort_complex(eigenvalues(A.T))
            assert np.abs(a - b).max() <= 1e-8 * max(1.0, np.abs(a).max())

    def test_magnitude_sorted(self, rng):
        vals = eigenvalues(rng.standard_normal((12, 12)))
        mags = np.abs(vals)
        assert np.all(mags[:-1] >= mags[1:] - 1e-15)

    def test_graded_matrix(self, rng):
        # Entries spanning many decades (monodromy-like) must still converge.
        D = np.diag(10.0 ** -(3.0 * np.arange(24) / 4.0))
        Q = np.linalg.qr(rng.standard_normal((24, 24)))[0]
        A = Q @ D @ Q.T
        vals = eigenvalues(A)
        ref = np.sort(np.abs(np.linalg.eigvals(A)))[::-1]
        assert np.abs(np.abs(vals[:8]) - ref[:8]).max() <= 1e-10


class TestVariationalRk4:
    def test_constant_triangular_jacobian(self):
        # Closed-form exponential of an upper-triangular matrix.
        a, b, d = -0.3, 1.0, -0.5
        J = np.array([[a, b], [0.0, d]])
        T = 2 * np.pi
        nfull, rem = split_horizon(T, 0.01)
        steps = [0.01] * nfull + ([rem] if rem else [])
        Q, overflow = variational_rk4(lambda n, t: J, steps, 2)
        assert not overflow
        eat, edt = np.exp(a * T), np.exp(d * T)
        expected = np.array([[eat, b * (eat - edt) / (a - d)], [0.0, edt]])
        assert np.abs(Q - expected).max() <= 1e-6

    def test_constant_rotation_jacobian(self):
        w = 1.0
        J = np.array([[0.0, -w], [w, 0.0]])
        T = 2 * np.pi
        nfull, rem = split_horizon(T, 0.01)
        steps = [0.01] * nfull + ([rem] if rem else [])
        Q, _ = variational_rk4(lambda n, t: J, steps, 2)
        assert np.abs(Q - np.eye(2)).max() <= 1e-6
