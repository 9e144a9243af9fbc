import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from gelfand.errors import ConvergenceError, DomainError, IntegrationError, UnsupportedOrderError
from gelfand.specfun import (
    SERIES_SWITCH,
    _bessel_miller,
    _bessel_series,
    bessel_j,
    gauss_legendre,
    integrate,
    laguerre,
    laguerre_function,
    laguerre_functions,
)


def series_oracle(n, x, terms=40):
    # plain power series in exact rational prefactors, float accumulation
    return sum((-1) ** k * (x / 2) ** (2 * k + n) / (math.factorial(k) * math.factorial(k + n)) for k in range(terms))


def first_zero_bisection():
    lo, hi = 2.0, 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if series_oracle(0, lo) * series_oracle(0, mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("order, x, expected", [(0, 0.0, 1.0), (1, 0.0, 0.0), (5, 0.0, 0.0)])
def test_bessel_at_origin(order, x, expected):
    assert bessel_j(order, x) == expected


def test_bessel_first_zero():
    z = first_zero_bisection()
    assert abs(z - 2.404825557695773) < 1e-12
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-10


@pytest.mark.parametrize("order", [0, 1, 2, 5, 10, 20, 32, 64])
def test_bessel_matches_scipy(order):
    x = np.linspace(-50, 50, 2001)
    assert np.max(np.abs(bessel_j(order, x) - special.jv(order, x))) < 1e-12


@pytest.mark.parametrize("order", [0, 1, 3, 7])
def test_bessel_matches_series_oracle_small_argument(order):
    x = np.linspace(0, 6, 61)
    ref = np.array([series_oracle(order, v) for v in x])
    assert np.max(np.abs(bessel_j(order, x) - ref)) < 1e-13


@pytest.mark.parametrize("order", [0, 1, 4, 12])
def test_bessel_branches_agree_near_switch(order):
    x = np.linspace(SERIES_SWITCH - 2, SERIES_SWITCH + 2, 41)
    assert np.max(np.abs(_bessel_series(order, x) - _bessel_miller(order, x))) < 1e-12


def test_bessel_recurrence():
    x = np.linspace(0.1, 40, 400)
    for n in range(1, 33):
        lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x)
        rhs = 2 * n / x * bessel_j(n, x)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_bessel_scalar_and_shape():
    assert isinstance(bessel_j(0, 1.5), float)
    assert bessel_j(2, np.zeros((3, 4))).shape == (3, 4)


@pytest.mark.parametrize("order", [-1, 65, 1.5])
def test_bessel_rejects_order(order):
    with pytest.raises(UnsupportedOrderError):
        bessel_j(order, 1.0)


def test_bessel_rejects_nonfinite():
    with pytest.raises(DomainError):
        bessel_j(0, np.inf)


@given(st.integers(0, 20), st.floats(-50, 50))
@settings(max_examples=200, deadline=None)
def test_bessel_bounded_and_parity(n, x):
    v = bessel_j(n, x)
    assert abs(v) <= 1 + 1e-12
    assert bessel_j(n, -x) == pytest.approx((-1) ** n * v, abs=1e-14)


@pytest.mark.parametrize("k, alpha, x, expected", [(0, 0, 5.0, 1.0), (1, 0, 2.0, -1.0), (2, 0, 0.0, 1.0)])
def test_laguerre_examples(k, alpha, x, expected):
    assert laguerre(k, alpha, x) == pytest.approx(expected, abs=1e-15)


def explicit_laguerre(k, alpha, x):
    return sum((-1) ** j * special.binom(k + alpha, k - j) * x**j / math.factorial(j) for j in range(k + 1))


@pytest.mark.parametrize("k", range(9))
@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
def test_laguerre_explicit_coefficients(k, alpha):
    x = np.linspace(0, 10, 21)
    assert np.allclose(laguerre(k, alpha, x), explicit_laguerre(k, alpha, x), rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("k", [10, 40, 120])
def test_laguerre_matches_scipy(k):
    x = np.linspace(0, 30, 61)
    ref = special.eval_genlaguerre(k, 1.0, x)
    assert np.allclose(laguerre(k, 1.0, x), ref, rtol=1e-9, atol=1e-9 * np.max(np.abs(ref)))


def test_laguerre_recurrence_identity():
    x = np.linspace(0, 20, 41)
    a = 1.5
    for k in range(1, 30):
        lhs = (k + 1) * laguerre(k + 1, a, x)
        rhs = (2 * k + 1 + a - x) * laguerre(k, a, x) - (k + a) * laguerre(k - 1, a, x)
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-9)


def test_laguerre_function_no_overflow():
    x = np.array([0.0, 1.0, 800.0, 2000.0])
    v = laguerre_function(40, x)
    assert np.all(np.isfinite(v))
    assert v[0] == 1.0
    assert abs(v[-1]) < 1e-300


def test_laguerre_functions_stack():
    x = np.linspace(0, 30, 31)
    stack = laguerre_functions(12, x)
    for k in range(13):
        assert np.allclose(stack[k], laguerre_function(k, x), rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("k, alpha, x", [(-1, 0, 1.0), (257, 0, 1.0), (2, -1.0, 1.0), (2, 0, -0.5)])
def test_laguerre_domain(k, alpha, x):
    with pytest.raises(DomainError):
        laguerre(k, alpha, x)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 33, 100, 400])
def test_gauss_legendre_matches_numpy(n):
    rule = gauss_legendre(n)
    x, w = np.polynomial.legendre.leggauss(n)
    assert np.allclose(rule.nodes, x, atol=1e-14)
    assert np.allclose(rule.weights, w, atol=1e-14)


@pytest.mark.parametrize("n, a, b", [(1, 0, 1), (5, -2, 3), (64, 0, 12), (400, 0, 20)])
def test_gauss_legendre_invariants(n, a, b):
    rule = gauss_legendre(n, a, b)
    assert len(rule) == n
    assert np.all(np.diff(rule.nodes) > 0)
    assert a <= rule.nodes[0] and rule.nodes[-1] <= b
    assert np.all(rule.weights > 0)
    assert abs(rule.weights.sum() - (b - a)) < 1e-12 * max(1, b - a)


@pytest.mark.parametrize("n", [1, 2, 4, 7, 12])
def test_gauss_legendre_exactness(n):
    rule = gauss_legendre(n, 0.0, 1.0)
    for d in range(2 * n):
        assert abs(integrate(rule, lambda x: x**d) - 1 / (d + 1)) < 1e-10


def test_gauss_legendre_examples():
    assert abs(integrate(gauss_legendre(4, 0, 1), lambda x: np.ones_like(x)) - 1) < 1e-14
    assert abs(integrate(gauss_legendre(2, 0, 1), lambda x: x * x) - 1 / 3) < 1e-14
    assert abs(gauss_legendre(8).weights.sum() - 2) < 1e-14


@pytest.mark.parametrize("n, a, b", [(0, 0, 1), (3, 1, 1), (2.5, 0, 1)])
def test_gauss_legendre_domain(n, a, b):
    with pytest.raises(DomainError):
        gauss_legendre(n, a, b)


def test_gauss_legendre_reports_failed_node():
    with pytest.raises(ConvergenceError) as info:
        gauss_legendre(50, maxiter=1, tol=0.0)
    assert info.value.index is not None


def test_integrate_zero_and_gaussian_moment():
    assert integrate(gauss_legendre(10), lambda x: 0 * x) == 0
    val = integrate(gauss_legendre(400, 0, 12), lambda x: np.exp(-x * x / 2) * x)
    assert abs(val - (1 - math.exp(-72))) < 1e-10


def test_integrate_refinement_oracle():
    f = lambda x: bessel_j(0, x) * x * np.exp(-x)
    coarse = integrate(gauss_legendre(800, 0, 40), f)
    fine = integrate(gauss_legendre(3200, 0, 40), f)
    assert abs(coarse - fine) < 1e-9


@pytest.mark.parametrize("f", [lambda x: np.exp(-x * x), lambda x: x**2 * np.exp(-x)])
def test_integrate_refinement_stability(f):
    a = integrate(gauss_legendre(400, 0, 20), f)
    b = integrate(gauss_legendre(800, 0, 20), f)
    assert abs(a - b) < 1e-9


def test_integrate_names_failing_node():
    def bad(x):
        if np.any(x > 0.5):
            raise ValueError("boom")
        return x

    with pytest.raises(IntegrationError) as info:
        integrate(gauss_legendre(5, 0, 1), bad)
    assert info.value.node > 0.5


def test_integrate_flags_nonfinite():
    with pytest.raises(IntegrationError):
        integrate(gauss_legendre(3, -1, 1), lambda x: np.where(x > 0.7, np.inf, 0.0))
