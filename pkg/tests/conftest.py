"""Shared test oracles.

Independent reference implementations used to check the package's
numerical kernels: an accelerated gradient-descent ridge minimizer,
Cardano's cubic formula, and a pure-Python xoshiro256** reference.
"""

from __future__ import annotations

import cmath

import numpy as np
import pytest


def ridge_gd_oracle(X, Y, beta, tol=1e-11, max_iter=400_000):
    """Minimize ||Y - WX||^2 + beta ||W||^2 by Nesterov-accelerated gradient
    descent, run to convergence.  Independent of any linear solve."""
    assert beta > 0, "the gradient oracle needs a strongly convex objective"
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    F = X.shape[0]
    gram = X @ X.T
    lam_max = float(np.linalg.eigvalsh(gram).max())
    L = 2.0 * (lam_max + beta)
    mu = 2.0 * beta
    kappa = L / mu
    theta = (np.sqrt(kappa) - 1.0) / (np.sqrt(kappa) + 1.0)
    B = Y @ X.T
    W = np.zeros((Y.shape[0], F))
    Z = W.copy()
    scale = 1.0 + np.abs(B).max()
    for _ in range(max_iter):
        grad = 2.0 * (Z @ gram - B) + 2.0 * beta * Z
        W_new = Z - grad / L
        Z = W_new + theta * (W_new - W)
        W = W_new
        g_here = 2.0 * (W @ gram - B) + 2.0 * beta * W
        if np.abs(g_here).max() <= tol * scale * beta:
            return W
    raise AssertionError("gradient-descent oracle failed to converge")


def cubic_roots_oracle(a, b, c):
    """Roots of z^3 + a z^2 + b z + c via Cardano's formula."""
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u3 = -q / 2.0 + disc
    if abs(u3) < abs(-q / 2.0 - disc):
        u3 = -q / 2.0 - disc
    if abs(u3) == 0.0:
        u = 0.0 + 0.0j
    else:
        u = u3 ** (1.0 / 3.0)
    omega = cmath.exp(2j * cmath.pi / 3.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        tk = uk - p / (3.0 * uk) if uk != 0 else 0.0 + 0.0j
        roots.append(tk - a / 3.0)
    return roots


_MASK = (1 << 64) - 1


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


class PyXoshiro:
    """Pure-Python xoshiro256** reference, seeded exactly like the kernel."""

    def __init__(self, seed, role=0):
        from multireservoir.rng import splitmix64, stream_seed

        s = stream_seed(seed, role)
        self.s = []
        for _ in range(4):
            value, s = splitmix64(s)
            self.s.append(value)

    def next_u64(self):
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self):
        return (self.next_u64() >> 11) * 2.0**-53


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
