"""Compiled numerical kernels.

Hot loops that cannot be expressed as BLAS calls live here as numba
``njit`` functions: the dense nonsymmetric eigensolver (Householder
reduction to Hessenberg form followed by Francis double-shift QR),
triangular substitution for the ridge solver, and bulk xoshiro256**
generation.  All kernels are scalar float64/uint64 code with no Python
object interaction so they compile once (``cache=True``) and run at
native speed.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_EPS = 2.220446049250313e-16

_U5 = np.uint64(5)
_U7 = np.uint64(7)
_U9 = np.uint64(9)
_U11 = np.uint64(11)
_U17 = np.uint64(17)
_U45 = np.uint64(45)
_U57 = np.uint64(57)
_U64 = np.uint64(64)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def xoshiro_fill(state, out):
    """Fill `out` with uniforms on [0, 1); advances `state` (4 uint64) in place."""
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    for idx in range(out.shape[0]):
        r = s1 * _U5
        r = ((r << _U7) | (r >> _U57)) * _U9
        t = s1 << _U17
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = (s3 << _U45) | (s3 >> (_U64 - _U45))
        out[idx] = float(r >> _U11) * _INV53
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3


@njit(cache=True)
def balance_inplace(a):
    """Diagonal similarity scaling that equalizes row and column norms.

    Essential for heavily graded matrices (e.g. monodromy matrices of
    strongly contracting flows, whose entries span many decades); powers
    of the radix keep the scaling exact in floating point.
    """
    n = a.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / radix
                f = 1.0
                s = c + r
                while c < g:
                    f *= radix
                    c *= sqrdx
                g = r * radix
                while c > g:
                    f /= radix
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f


@njit(cache=True)
def hessenberg_inplace(h):
    """Reduce a square matrix to upper Hessenberg form by Householder reflections.

    Similarity transform only (no accumulation of the orthogonal factor);
    eigenvalues are preserved.
    """
    n = h.shape[0]
    v = np.empty(n, dtype=np.float64)
    for k in range(n - 2):
        # Scale the pivot column to avoid overflow in the norm.
        scale = 0.0
        for i in range(k + 1, n):
            a = abs(h[i, k])
            if a > scale:
                scale = a
        if scale == 0.0:
            continue
        norm2 = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k] / scale
            norm2 += v[i] * v[i]
        norm = math.sqrt(norm2)
        alpha = -norm if v[k + 1] >= 0.0 else norm
        v[k + 1] -= alpha
        vtv = norm2 - 2.0 * alpha * (v[k + 1] + alpha) + alpha * alpha
        # vtv from the update: |x|^2 - 2 alpha x_1 + alpha^2 with x_1 = v[k+1]+alpha
        if vtv <= 0.0:
            continue
        beta = 2.0 / vtv
        # Left multiply rows k+1..n-1 over columns k..n-1.
        for j in range(k, n):
            dot = 0.0
            for i in range(k + 1, n):
                dot += v[i] * h[i, j]
            dot *= beta
            for i in range(k + 1, n):
                h[i, j] -= dot * v[i]
        # Right multiply all rows over columns k+1..n-1.
        for i in range(n):
            dot = 0.0
            for j in range(k + 1, n):
                dot += h[i, j] * v[j]
            dot *= beta
            for j in range(k + 1, n):
                h[i, j] -= dot * v[j]
        h[k + 1, k] = alpha * scale
        for i in range(k + 2, n):
            h[i, k] = 0.0


@njit(cache=True)
def hqr_eigvals(h, wr, wi):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Destroys `h`.  Real parts land in `wr`, imaginary parts in `wi`.
    Returns 0 on success, 1 if an eigenvalue failed to deflate within 50
    sweeps (exceptional shifts are applied every 10 sweeps).

    Deflation uses the usual relative test against the neighboring diagonal
    entries with an absolute floor of eps * (matrix scale): subdiagonals
    below the noise floor of the whole matrix carry no information (zeroing
    them is a backward-stable perturbation), and without the floor heavily
    graded matrices - monodromy matrices of contracting flows - stall the
    iteration, since shifts sized to noise-level trailing eigenvalues
    cannot move the leading block.
    """
    n = h.shape[0]
    anorm = 0.0
    for i in range(n):
        lo = i - 1 if i >= 1 else 0
        for j in range(lo, n):
            anorm += abs(h[i, j])
    if anorm == 0.0:
        for i in range(n):
            wr[i] = 0.0
            wi[i] = 0.0
        return 0
    floor = _EPS * anorm / n
    nn = n - 1
    t = 0.0
    p = 0.0
    q = 0.0
    r = 0.0
    while nn >= 0:
        its = 0
        while True:
            # Find a negligible subdiagonal element; active block is [l, nn].
            l = nn
            while l >= 1:
                s = abs(h[l - 1, l - 1]) + abs(h[l, l])
                if s == 0.0:
                    s = anorm
                thr = _EPS * s
                if thr < floor:
                    thr = floor
                if abs(h[l, l - 1]) <= thr:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            x = h[nn, nn]
            if l == nn:
                # One real eigenvalue.
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:
                # A 2x2 block: real pair or complex conjugate pair.
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + (z if p >= 0.0 else -z)
                    wr[nn - 1] = x + z
                    wr[nn] = wr[nn - 1]
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn] = z
                    wi[nn - 1] = -z
                nn -= 2
                break
            if its == 50:
                return 1
            if its != 0 and its % 10 == 0:
                # Exceptional shift to break symmetry stalls.
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = abs(h[nn, nn - 1]) + abs(h[nn - 1, nn - 2])
                y = 0.75 * s
                x = y
                w = -0.4375 * s * s
            its += 1
            # Look for two consecutive small subdiagonals to start the chase.
            m = nn - 2
            while m >= l:
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(h[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[m - 1, m - 1]) + abs(z) + abs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
                if i != m + 2:
                    h[i, i - 3] = 0.0
            # Double-shift QR sweep: chase the bulge from m to nn-1.
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = h[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        h[k, k - 1] = -h[k, k - 1]
                else:
                    h[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    pp = h[k, j] + q * h[k + 1, j]
                    if k != nn - 1:
                        pp += r * h[k + 2, j]
                        h[k + 2, j] -= pp * z
                    h[k + 1, j] -= pp * y
                    h[k, j] -= pp * x
                mmin = nn if nn < k + 3 else k + 3
                for i in range(l, mmin + 1):
                    pp = x * h[i, k] + y * h[i, k + 1]
                    if k != nn - 1:
                        pp += z * h[i, k + 2]
                        h[i, k + 2] -= pp * r
                    h[i, k + 1] -= pp * q
                    h[i, k] -= pp
    return 0


@njit(cache=True)
def solve_lower_inplace(L, B):
    """Solve L X = B for lower-triangular L, overwriting B with X."""
    n = L.shape[0]
    m = B.shape[1]
    for i in range(n):
        for k in range(i):
            lik = L[i, k]
            if lik != 0.0:
                for j in range(m):
                    B[i, j] -= lik * B[k, j]
        d = L[i, i]
        for j in range(m):
            B[i, j] /= d


@njit(cache=True)
def solve_lower_transpose_inplace(L, B):
    """Solve L^T X = B for lower-triangular L, overwriting B with X."""
    n = L.shape[0]
    m = B.shape[1]
    for i in range(n - 1, -1, -1):
        for k in range(i + 1, n):
            lki = L[k, i]
            if lki != 0.0:
                for j in range(m):
                    B[i, j] -= lki * B[k, j]
        d = L[i, i]
        for j in range(m):
            B[i, j] /= d
