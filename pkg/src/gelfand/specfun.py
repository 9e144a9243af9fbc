"""Special functions and Gauss-Legendre quadrature.

Everything here is self-contained numpy: integer-order Bessel functions of
the first kind, generalized Laguerre polynomials (and the exponentially
weighted Laguerre functions used by the Heisenberg profiles), and
Gauss-Legendre rules with a small ``integrate`` helper.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, IntegrationError, UnsupportedOrderError

__all__ = [
    "QuadratureRule",
    "bessel_j",
    "laguerre",
    "laguerre_function",
    "gauss_legendre",
    "integrate",
    "MAX_BESSEL_ORDER",
    "SERIES_SWITCH",
]

MAX_BESSEL_ORDER = 64
MAX_LAGUERRE_DEGREE = 256

# Largest |x| handled by the power series.  At |x| = 8 the largest series
# term of J_0 is ~7e1, so cancellation costs < 1e-13; at 12 it is ~4e3.
SERIES_SWITCH = 8.0


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a quadrature rule on ``[a, b]``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __len__(self):
        return len(self.nodes)


# ---------------------------------------------------------------------------
# Bessel functions


def _bessel_series(n, x):
    # sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term.copy()
    q = -half * half
    for k in range(1, 80):
        term = term * q / (k * (k + n))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _bessel_miller(n, x):
    """Backward (Miller) recurrence normalized by J_0 + 2 sum J_2k = 1.

    ``x`` must be positive and bounded away from zero.
    """
    xmax = float(np.max(x))
    top = max(n, xmax)
    start = int(top + 30 + 8 * math.sqrt(top))
    start += start % 2  # even start keeps the normalization sum aligned
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    out = np.zeros_like(x)
    for k in range(start, 0, -1):
        jm1 = (2.0 * k / x) * j - jp1
        jp1, j = j, jm1
        # j now holds J_{k-1}
        if k - 1 == n:
            out = j.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
        big = np.abs(j) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            j *= scale
            jp1 *= scale
            norm *= scale
            out *= scale
    norm += j  # J_0
    return out / norm


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)`` for integer order.

    Power series for ``|x| <= SERIES_SWITCH``, Miller backward recurrence
    beyond.  Accepts scalars or arrays; returns the same shape.

    Raises
    ------
    UnsupportedOrderError
        If ``order`` is not an integer in ``[0, MAX_BESSEL_ORDER]``.
    """
    if int(order) != order or not 0 <= order <= MAX_BESSEL_ORDER:
        raise UnsupportedOrderError(f"bessel_j supports integer orders 0..{MAX_BESSEL_ORDER}, got {order}")
    n = int(order)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise DomainError("bessel_j requires finite arguments")
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    ax = np.abs(xa)
    out = np.empty_like(ax)
    small = ax <= SERIES_SWITCH
    if np.any(small):
        out[small] = _bessel_series(n, ax[small])
    if np.any(~small):
        out[~small] = _bessel_miller(n, ax[~small])
    if n % 2 == 1:
        out = np.where(xa < 0, -out, out)
    return float(out[0]) if scalar else out.reshape(np.shape(x))


# ---------------------------------------------------------------------------
# Laguerre


def _check_laguerre(k, alpha, x):
    if int(k) != k or not 0 <= k <= MAX_LAGUERRE_DEGREE:
        raise DomainError(f"Laguerre degree must be an integer in 0..{MAX_LAGUERRE_DEGREE}, got {k}")
    if alpha < 0:
        raise DomainError("Laguerre parameter alpha must be >= 0")
    if np.any(np.asarray(x) < 0):
        raise DomainError("Laguerre argument must be >= 0")


def _laguerre_recurrence(k, alpha, x, l0):
    # (j+1) L_{j+1} = (2j+1+alpha-x) L_j - (j+alpha) L_{j-1}
    prev = l0
    if k == 0:
        return prev
    cur = (1.0 + alpha - x) * l0
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur


def laguerre(k, alpha, x):
    """Generalized Laguerre polynomial ``L_k^(alpha)(x)`` by three-term recurrence."""
    _check_laguerre(k, alpha, x)
    xa = np.asarray(x, dtype=float)
    val = _laguerre_recurrence(int(k), float(alpha), xa, np.ones_like(xa))
    return float(val) if xa.ndim == 0 else val


def laguerre_function(k, x, alpha=0.0):
    """``exp(-x/2) L_k^(alpha)(x)``, computed without overflow.

    The weight is folded into the starting values of the (linear) recurrence,
    so large ``x`` underflows gracefully instead of producing ``inf * 0``.
    """
    _check_laguerre(k, alpha, x)
    xa = np.asarray(x, dtype=float)
    val = _laguerre_recurrence(int(k), float(alpha), xa, np.exp(-0.5 * xa))
    return float(val) if xa.ndim == 0 else val


def laguerre_functions(kmax, x):
    """Stack ``[exp(-x/2) L_k(x) for k in 0..kmax]`` along a new leading axis."""
    _check_laguerre(kmax, 0.0, x)
    xa = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + xa.shape)
    out[0] = np.exp(-0.5 * xa)
    if kmax >= 1:
        out[1] = (1.0 - xa) * out[0]
    for j in range(1, kmax):
        out[j + 1] = ((2 * j + 1 - xa) * out[j] - j * out[j - 1]) / (j + 1)
    return out


# ---------------------------------------------------------------------------
# Quadrature


def gauss_legendre(n, a=-1.0, b=1.0, tol=1e-15, maxiter=100):
    """n-point Gauss-Legendre rule on ``[a, b]``.

    Nodes are found by Newton iteration on the Legendre three-term recurrence,
    started from the Tricomi approximation.

    Raises
    ------
    ConvergenceError
        If a node fails to converge; ``index`` names the first such node.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"number of nodes must be a positive integer, got {n}")
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    n = int(n)
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    done = np.zeros(n, dtype=bool)
    dp = np.ones(n)
    for _ in range(maxiter):
        p0 = np.ones(n)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = np.where(done, x, x - dx)
        done |= np.abs(dx) <= tol
        if done.all():
            break
    else:
        bad = int(np.flatnonzero(~done)[0])
        raise ConvergenceError(f"Gauss-Legendre node {bad} of {n} did not converge", index=bad)
    # one more derivative evaluation at the converged nodes
    p0 = np.ones(n)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * x
    return QuadratureRule(nodes=nodes, weights=half * w, interval=(float(a), float(b)))


def integrate(rule: QuadratureRule, f: Callable) -> complex:
    """``sum_i w_i f(x_i)``.

    ``f`` is called once on the whole node array.  If that raises, the nodes
    are retried one by one so the error can name the failing node.
    """
    try:
        vals = np.asarray(f(rule.nodes))
        if vals.shape != rule.nodes.shape:
            vals = np.broadcast_to(vals, rule.nodes.shape)
    except Exception as exc:
        for i, xi in enumerate(rule.nodes):
            try:
                f(np.array([xi]))
            except Exception as inner:
                raise IntegrationError(f"integrand failed at node {i} (x = {xi!r}): {inner}", node=float(xi)) from inner
        raise IntegrationError(f"integrand failed: {exc}") from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise IntegrationError(f"integrand is not finite at node {i} (x = {rule.nodes[i]!r})", node=float(rule.nodes[i]))
    total = np.dot(rule.weights, vals)
    return complex(total)
