"""Cyclic Jacobi eigenvalues for small dense Hermitian matrices.

Rotations are applied in round-robin (chess tournament) order so that each
sweep step acts on ``n // 2`` disjoint index pairs at once.
"""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = ["jacobi_eigvalsh", "MAX_JACOBI_SIZE"]

MAX_JACOBI_SIZE = 400


def _round_robin(n):
    """Yield lists of disjoint pairs covering every (p, q) once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                pairs.append((min(p, q), max(p, q)))
        yield pairs
        players = [players[0]] + [players[-1]] + players[1:-1]


def jacobi_eigvalsh(a, tol=1e-15, max_sweeps=60):
    """Eigenvalues (ascending) of a Hermitian matrix by Jacobi rotations.

    Parameters
    ----------
    a : (n, n) array_like
        Hermitian matrix; only exact Hermitian symmetry up to rounding is
        assumed, the matrix is symmetrized first.
    tol : float
        Stop once the off-diagonal Frobenius norm falls below
        ``tol * ||a||_F``.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("expected a square matrix")
    n = a.shape[0]
    if n > MAX_JACOBI_SIZE:
        raise DomainError(f"matrix of size {n} exceeds {MAX_JACOBI_SIZE}")
    a = 0.5 * (a + a.conj().T)
    if n <= 1:
        return np.sort(a.diagonal().real)
    scale = np.linalg.norm(a)
    if scale == 0:
        return np.zeros(n)
    schedule = list(_round_robin(n))
    for _sweep in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= tol * scale:
            return np.sort(a.diagonal().real)
        for pairs in schedule:
            P = np.array([p for p, _ in pairs])
            Q = np.array([q for _, q in pairs])
            b = a[P, Q]
            mag = np.abs(b)
            live = mag > 1e-300
            if not np.any(live):
                continue
            P, Q, b, mag = P[live], Q[live], b[live], mag[live]
            e = b / mag
            tau = (a[Q, Q].real - a[P, P].real) / (2 * mag)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1 / np.sqrt(1 + t * t)
            s = t * c
            # columns
            cp, cq = a[:, P].copy(), a[:, Q].copy()
            a[:, P] = c * cp - s * np.conj(e) * cq
            a[:, Q] = s * cp + c * np.conj(e) * cq
            # rows
            rp, rq = a[P, :].copy(), a[Q, :].copy()
            a[P, :] = c[:, None] * rp - (s * e)[:, None] * rq
            a[Q, :] = s[:, None] * rp + (c * e)[:, None] * rq
            a[P, Q] = 0
            a[Q, P] = 0
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
