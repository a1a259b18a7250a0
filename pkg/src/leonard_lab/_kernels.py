"""Batch screening of split-form candidates over GF(p).

Given eigenvalue sequences θ, θ* and a batch of first split sequences φ,
decide for each φ whether the split-form pair is irreducible tridiagonal in
both eigenbases taken in the given orders. This is the inner loop of the
finite-field search; hits are re-verified exactly afterwards, so the screen
only has to be fast and never miss.

Two interchangeable backends share one contract: a numba ``@njit`` loop and
a vectorised numpy version. ``LEONARD_LAB_DISABLE_NUMBA=1`` (or a missing
numba) selects numpy.
"""

from __future__ import annotations

import os

import numpy as np

MAX_MODULUS = 1 << 28  # keeps n*p^2 inside int64 for n <= 5

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("LEONARD_LAB_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag not in ("1", "true", "yes", "on")


def _primal_basis(theta, p):
    """Lower unitriangular matrix of A-eigenvectors and its inverse (mod p).

    Independent of φ, so it is built once per (θ, θ*) pair.
    """
    n = len(theta)
    P = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        P[j, j] = 1
        for k in range(j + 1, n):
            # (θ_k − θ_j) v_k + v_{k−1} = 0
            P[k, j] = (-P[k - 1, j] * pow(int(theta[k] - theta[j]) % p, -1, p)) % p
    Pinv = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        Pinv[j, j] = 1
        for i in range(j + 1, n):
            s = 0
            for k in range(j, i):
                s += int(P[i, k]) * int(Pinv[k, j])
            Pinv[i, j] = (-s) % p
    return P, Pinv


def _inverse_diffs(theta_star, p):
    n = len(theta_star)
    out = np.zeros((n, n), dtype=np.int64)
    for k in range(n):
        for j in range(n):
            if k != j:
                out[k, j] = pow(int(theta_star[k] - theta_star[j]) % p, -1, p)
    return out


# numpy backend ---------------------------------------------------------------


def _irreducible_tridiagonal_np(M):
    n = M.shape[-1]
    i, j = np.indices((n, n))
    far = np.abs(i - j) > 1
    ok = ~np.any(M[:, far] != 0, axis=1)
    if n > 1:
        sub = M[:, np.arange(1, n), np.arange(0, n - 1)]
        sup = M[:, np.arange(0, n - 1), np.arange(1, n)]
        ok &= np.all(sub != 0, axis=1) & np.all(sup != 0, axis=1)
    return ok


def _screen_numpy(theta, theta_star, phis, p, P, Pinv, invdiff):
    N, d = phis.shape
    n = d + 1
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        A[i, i] = theta[i] % p
        if i:
            A[i, i - 1] = 1
    As = np.zeros((N, n, n), dtype=np.int64)
    for i in range(n):
        As[:, i, i] = theta_star[i] % p
    for i in range(1, n):
        As[:, i - 1, i] = phis[:, i - 1] % p

    # A* in the A-eigenbasis
    dual_side = (Pinv @ ((As @ P) % p)) % p
    ok = _irreducible_tridiagonal_np(dual_side)

    # upper unitriangular A*-eigenbasis, one per candidate
    Ps = np.zeros((N, n, n), dtype=np.int64)
    for j in range(n):
        Ps[:, j, j] = 1
        for k in range(j - 1, -1, -1):
            Ps[:, k, j] = (-(phis[:, k] % p) * Ps[:, k + 1, j] % p) * invdiff[k, j] % p
    Y = (A @ Ps) % p
    X = np.zeros_like(Y)
    for i in range(n - 1, -1, -1):
        acc = Y[:, i, :].copy()
        for k in range(i + 1, n):
            acc = (acc - Ps[:, i, k][:, None] * X[:, k, :]) % p
        X[:, i, :] = acc
    ok &= _irreducible_tridiagonal_np(X)
    return ok


# numba backend -----------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _is_irreducible_tridiagonal_nb(M):
        n = M.shape[0]
        for i in range(n):
            for j in range(n):
                gap = i - j if i > j else j - i
                if gap > 1 and M[i, j] != 0:
                    return False
                if gap == 1 and M[i, j] == 0:
                    return False
        return True

    @numba.njit(cache=True)
    def _screen_numba(theta, theta_star, phis, p, P, Pinv, invdiff):
        N, d = phis.shape
        n = d + 1
        out = np.zeros(N, dtype=np.bool_)
        A = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            A[i, i] = theta[i] % p
            if i > 0:
                A[i, i - 1] = 1
        As = np.zeros((n, n), dtype=np.int64)
        T = np.zeros((n, n), dtype=np.int64)
        M = np.zeros((n, n), dtype=np.int64)
        Ps = np.zeros((n, n), dtype=np.int64)
        X = np.zeros((n, n), dtype=np.int64)
        for c in range(N):
            As[:, :] = 0
            for i in range(n):
                As[i, i] = theta_star[i] % p
            for i in range(1, n):
                As[i - 1, i] = phis[c, i - 1] % p
            # A* in the A-eigenbasis: Pinv @ As @ P
            for i in range(n):
                for j in range(n):
                    s = 0
                    for k in range(n):
                        s += As[i, k] * P[k, j]
                    T[i, j] = s % p
            for i in range(n):
                for j in range(n):
                    s = 0
                    for k in range(n):
                        s += Pinv[i, k] * T[k, j]
                    M[i, j] = s % p
            if not _is_irreducible_tridiagonal_nb(M):
                continue
            # A in the A*-eigenbasis
            Ps[:, :] = 0
            for j in range(n):
                Ps[j, j] = 1
                for k in range(j - 1, -1, -1):
                    Ps[k, j] = ((-(phis[c, k] % p) * Ps[k + 1, j]) % p) * invdiff[k, j] % p
            for i in range(n):
                for j in range(n):
                    s = 0
                    for k in range(n):
                        s += A[i, k] * Ps[k, j]
                    T[i, j] = s % p
            for i in range(n - 1, -1, -1):
                for j in range(n):
                    acc = T[i, j]
                    for k in range(i + 1, n):
                        acc = (acc - Ps[i, k] * X[k, j]) % p
                    X[i, j] = acc % p
            out[c] = _is_irreducible_tridiagonal_nb(X)
        return out


def screen_split_candidates(theta, theta_star, phis, p, backend=None):
    """Boolean mask over the rows of ``phis`` (shape ``(N, d)``).

    ``theta``/``theta_star`` are residue sequences of length d+1 with
    pairwise-distinct entries. ``backend`` forces ``"numba"`` or ``"numpy"``.
    """
    if p >= MAX_MODULUS:
        raise ValueError(f"screening kernel requires p < {MAX_MODULUS}")
    theta = np.asarray(theta, dtype=np.int64) % p
    theta_star = np.asarray(theta_star, dtype=np.int64) % p
    phis = np.ascontiguousarray(np.asarray(phis, dtype=np.int64).reshape(-1, len(theta) - 1)) % p
    P, Pinv = _primal_basis(theta, p)
    invdiff = _inverse_diffs(theta_star, p)
    if backend is None:
        backend = "numba" if numba_enabled() else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _screen_numba(theta, theta_star, phis, np.int64(p), P, Pinv, invdiff)
    if backend == "numpy":
        return _screen_numpy(theta, theta_star, phis, p, P, Pinv, invdiff)
    raise ValueError(f"unknown backend {backend!r}")
