import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from gelfand import pairs
from gelfand.errors import DomainError, GridError, ResolutionError, UnsupportedPairError
from gelfand.pairs import GroupPoint, apply_generator, eigenvalue_map, get_pair, group_convolve, spectrum_grid, spherical
from gelfand.sampling import Axis, periodic_theta, sample
from gelfand.transform import verify_commutativity

PAIR_IDS = ["flat_r1", "e2", "u1_c", "heis1"]


def sigma_strategy(pair):
    lam = st.floats(0, 20)
    if pair == "u1_c":
        return st.builds(lambda m, l: get_pair(pair).point(m=m, **{"lambda": l}), st.integers(-30, 30), lam)
    if pair == "heis1":
        fan = st.builds(lambda k, l: get_pair(pair).point(branch="fan", k=k, **{"lambda": l}), st.integers(0, 60), st.floats(-20, 20))
        ray = st.builds(lambda e: get_pair(pair).point(branch="ray", eta=e), lam)
        return st.one_of(fan, ray)
    return st.builds(lambda l: get_pair(pair).point(**{"lambda": l}), lam)


def point_strategy(pair):
    p = get_pair(pair)
    coord = st.floats(-10, 10)
    theta = st.floats(0, 2 * math.pi, exclude_max=True)
    return st.builds(
        lambda th, z: GroupPoint(tuple(th), tuple(z)),
        st.lists(theta, min_size=p.descriptor.r, max_size=p.descriptor.r),
        st.lists(coord, min_size=len(p.h_coords), max_size=len(p.h_coords)),
    )


# --- descriptors and spectrum ----------------------------------------------


@pytest.mark.parametrize(
    "pair, ell, r, strong",
    [("flat_r1", 1, 0, False), ("e2", 1, 0, False), ("u1_c", 2, 1, True), ("heis1", 2, 0, False)],
)
def test_descriptor(pair, ell, r, strong):
    d = get_pair(pair).descriptor
    assert (d.ell, d.r, d.strong) == (ell, r, strong)
    assert len(d.generator_names) == ell
    assert 0 <= d.r <= d.ell


def test_unknown_pair():
    with pytest.raises(UnsupportedPairError):
        get_pair("so3")


@pytest.mark.parametrize(
    "pair, params, xi",
    [
        ("flat_r1", {"lambda": 0.0}, (0.0,)),
        ("e2", {"lambda": 3.0}, (9.0,)),
        ("u1_c", {"m": 3, "lambda": 2.0}, (3.0, 4.0)),
        ("heis1", {"lambda": -2.0, "k": 1}, (6.0, -2.0)),
        ("heis1", {"branch": "ray", "eta": 1.5}, (2.25, 0.0)),
    ],
)
def test_eigenvalue_map(pair, params, xi):
    assert eigenvalue_map(pair, params).xi == pytest.approx(xi, abs=1e-12)


@pytest.mark.parametrize(
    "pair, params",
    [
        ("e2", {"lambda": -1.0}),
        ("e2", {"lambda": float("nan")}),
        ("u1_c", {"m": 1.5, "lambda": 1.0}),
        ("heis1", {"lambda": 1.0, "k": -1}),
        ("heis1", {"branch": "ray", "eta": -1.0}),
        ("heis1", {"branch": "cone"}),
    ],
)
def test_invalid_params(pair, params):
    with pytest.raises(DomainError):
        eigenvalue_map(pair, params)


def test_spectrum_grid_examples():
    u = spectrum_grid("u1_c", {"m": range(-2, 3), "lambda": [0.0, 1.0]})
    assert sorted(s.xi for s in u) == sorted((float(m), l) for m in range(-2, 3) for l in (0.0, 1.0))
    h = spectrum_grid("heis1", {"kmax": 2, "lambda": [1.0], "eta": []})
    assert [s.xi for s in h] == [(1.0, 1.0), (3.0, 1.0), (5.0, 1.0)]
    assert [s.xi for s in spectrum_grid("e2", {"lambda": [0, 1, 2]})] == [(0.0,), (1.0,), (4.0,)]
    assert spectrum_grid("e2", {}) == []


def test_heis_fan_closed_by_ray():
    pts = spectrum_grid("heis1", {"kmax": 3, "lambda": np.linspace(-2, 2, 9)})
    fan = [s for s in pts if s.params["branch"] == "fan"]
    ray = [s for s in pts if s.params["branch"] == "ray"]
    for s in fan:
        assert s.xi[0] == pytest.approx(abs(s.xi[1]) * (2 * s.params["k"] + 1))
    assert all(s.xi[1] == 0 and s.xi[0] >= 0 for s in ray)
    assert len(ray) == 5


def test_spectrum_grid_deterministic():
    b = {"m": [-1, 0, 1], "lambda": [0.0, 0.5]}
    assert spectrum_grid("u1_c", b) == spectrum_grid("u1_c", b)


@pytest.mark.parametrize("pair", PAIR_IDS)
def test_xi_recomputable(pair):
    p = get_pair(pair)
    for s in spectrum_grid(pair, {"m": [-2, 0, 3], "lambda": [0.0, 0.7, 2.0], "kmax": 3}):
        assert eigenvalue_map(pair, s.params).xi == pytest.approx(s.xi, abs=1e-12)
        assert all(np.isreal(s.xi))
        assert len(s.xi) == p.descriptor.ell


@pytest.mark.parametrize("pair", PAIR_IDS)
def test_injectivity_on_sampled_spectrum(pair):
    pts = spectrum_grid(pair, {"m": range(-3, 4), "lambda": np.linspace(0.1, 4, 15), "kmax": 6})
    xi = np.array([s.xi for s in pts])
    d = np.linalg.norm(xi[:, None, :] - xi[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    assert d.min() >= 1e-9


# --- spherical functions ----------------------------------------------------


@pytest.mark.parametrize("pair", PAIR_IDS)
def test_normalized_at_identity(pair):
    p = get_pair(pair)
    for s in spectrum_grid(pair, {"m": [-2, 0, 5], "lambda": [0.0, 1.3, 7.0], "kmax": 5}):
        assert abs(spherical(p, s, p.identity()) - 1) < 1e-12


def test_spherical_examples():
    e2 = get_pair("e2")
    assert abs(spherical(e2, e2.point(**{"lambda": 1.0}), GroupPoint((), (2.404825557695773, 0.0)))) < 1e-10
    h = get_pair("heis1")
    v = spherical(h, h.point(k=0, **{"lambda": 1.0}), GroupPoint((), (0.0, 0.0, math.pi)))
    assert abs(v - (-1)) < 1e-12


def test_spherical_closed_forms_against_scipy():
    h = get_pair("heis1")
    s = h.point(k=3, **{"lambda": -1.7})
    x, y, t = 0.4, -1.1, 0.9
    r2 = x * x + y * y
    ref = np.exp(-1.7j * t) * np.exp(-1.7 * r2 / 4) * special.eval_laguerre(3, 1.7 * r2 / 2)
    assert abs(spherical(h, s, GroupPoint((), (x, y, t))) - ref) < 1e-13
    u = get_pair("u1_c")
    s = u.point(m=-2, **{"lambda": 2.5})
    ref = np.exp(-2j * 0.8) * special.j0(2.5 * math.hypot(1.0, 2.0))
    assert abs(spherical(u, s, GroupPoint((0.8,), (1.0, 2.0))) - ref) < 1e-13


def test_heis_ray_is_limit_of_fan():
    # phi_{lam,k} -> J_0(eta |z|) as lam -> 0 with |lam|(2k+1) -> eta^2
    h = get_pair("heis1")
    eta = 1.3
    z = GroupPoint((), (0.7, 0.4, 0.0))
    ray = spherical(h, h.point(branch="ray", eta=eta), z)
    k = 256
    fan = spherical(h, h.point(k=k, **{"lambda": eta**2 / (2 * k + 1)}), z)
    assert abs(fan - ray) < 1e-3


@pytest.mark.parametrize("pair", PAIR_IDS)
@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_bounded_and_hermitian(pair, data):
    p = get_pair(pair)
    s = data.draw(sigma_strategy(pair))
    x = data.draw(point_strategy(pair))
    v = spherical(p, s, x)
    assert abs(v) <= 1 + 1e-12
    assert abs(spherical(p, s, p.inverse(x)) - np.conj(v)) < 1e-12


# --- group law ----------------------------------------------------------------


@pytest.mark.parametrize("pair", ["flat_r1", "e2", "heis1"])
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_associativity_exact(pair, data):
    p = get_pair(pair)
    frac = st.fractions(min_value=-20, max_value=20, max_denominator=50)
    pts = [GroupPoint((), tuple(data.draw(frac) for _ in p.h_coords)) for _ in range(3)]
    a, b, c = pts
    assert p.multiply(p.multiply(a, b), c) == p.multiply(a, p.multiply(b, c))
    assert p.multiply(a, p.inverse(a)) == GroupPoint((), tuple(Fraction(0) for _ in p.h_coords))


@pytest.mark.parametrize("pair", PAIR_IDS)
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_associativity_float(pair, data):
    p = get_pair(pair)
    a, b, c = (data.draw(point_strategy(pair)) for _ in range(3))
    lhs = p.multiply(p.multiply(a, b), c)
    rhs = p.multiply(a, p.multiply(b, c))
    assert np.allclose(lhs.z, rhs.z, atol=1e-12, rtol=1e-14)
    if p.descriptor.r:
        d = (lhs.theta[0] - rhs.theta[0] + math.pi) % (2 * math.pi) - math.pi
        assert abs(d) < 1e-12
    e = p.multiply(a, p.inverse(a))
    assert np.allclose(e.z, 0, atol=1e-12)


# --- generators ---------------------------------------------------------------


def patch(names, center, step, n=9):
    return tuple(Axis(nm, c - (n // 2) * step, c + (n // 2) * step, n) for nm, c in zip(names, center))


def test_theta_derivative_on_pure_type():
    step = 1e-3
    grid = patch(("theta", "x", "y"), (0.4, 0.3, -0.2), step)
    f = sample("u1_c", grid, lambda theta, x, y: np.exp(2j * theta) * np.exp(-(x * x + y * y)), symmetry="K-type", ktype=2)
    d = apply_generator("u1_c", 1, f, step).values
    inner = (slice(1, -1),) * 3
    assert np.max(np.abs(d[inner] - 2 * f.values[inner])) < 1e-5


def test_boundary_ring_flagged():
    step = 1e-3
    grid = patch(("x", "y"), (0.1, 0.1), step)
    f = sample("e2", grid, lambda x, y: np.exp(-(x * x + y * y)))
    d = apply_generator("e2", 1, f, step).values
    assert np.all(np.isnan(d[0])) and np.all(np.isnan(d[:, -1]))
    assert np.all(np.isfinite(d[1:-1, 1:-1]))


@pytest.mark.parametrize(
    "pair, params, center, tol",
    [
        ("e2", {"lambda": 1.0}, (0.3, -0.2), 1e-4),
        ("heis1", {"lambda": 1.0, "k": 0}, (0.3, -0.2, 0.4), 1e-3),
        ("heis1", {"lambda": -1.5, "k": 2}, (0.6, 0.5, -0.7), 1e-3),
        ("flat_r1", {"lambda": 2.0}, (0.37,), 1e-4),
    ],
)
def test_generator_eigen_residual(pair, params, center, tol):
    p = get_pair(pair)
    s = p.point(**params)
    step = 1e-3
    f = sample(pair, patch(p.h_coords, center, step), lambda **kw: p.phi(s, **kw), symmetry="none")
    inner = (slice(1, -1),) * f.values.ndim
    for j in range(1, p.descriptor.ell + 1):
        d = apply_generator(pair, j, f, step).values[inner] - s.xi[j - 1] * f.values[inner]
        assert np.max(np.abs(d)) / np.max(np.abs(f.values[inner])) < tol


def test_generator_resolution_and_grid_errors():
    f = sample("e2", patch(("x", "y"), (0, 0), 0.05), lambda x, y: x * 0 + 1.0)
    with pytest.raises(ResolutionError):
        apply_generator("e2", 1, f, 0.05)
    g = sample("e2", patch(("x", "y"), (0, 0), 1e-3), lambda x, y: x * 0 + 1.0)
    with pytest.raises(GridError):
        apply_generator("e2", 1, g, 2e-3)
    with pytest.raises(DomainError):
        apply_generator("e2", 2, g, 1e-3)


# --- convolution ----------------------------------------------------------------


def plane(half=8.0, n=65):
    return Axis("x", -half, half, n), Axis("y", -half, half, n)


def test_e2_gaussian_convolution_identity():
    ax = plane(8.0, 129)
    f = sample("e2", ax, lambda x, y: np.exp(-(x * x + y * y) / 2))
    h = group_convolve("e2", f, f)
    m = h.mesh()
    ref = math.pi * np.exp(-(m["x"] ** 2 + m["y"] ** 2) / 4)
    assert np.max(np.abs(h.values - ref)) < 1e-4
    # independent Riemann-sum oracle at a few off-centre nodes
    xs, ys = ax[0].nodes(), ax[1].nodes()
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    hx = xs[1] - xs[0]
    for i, j in [(64, 64), (70, 60), (80, 90)]:
        x0, y0 = xs[i], ys[j]
        direct = np.sum(np.exp(-((x0 - X) ** 2 + (y0 - Y) ** 2) / 2) * np.exp(-(X * X + Y * Y) / 2)) * hx * hx
        assert abs(h.values[i, j] - direct) < 1e-10


def test_mollifier_approximates_identity():
    ax = plane(4.0, 65)
    f = sample("e2", ax, lambda x, y: np.exp(-(x * x + y * y) / 2))
    h = ax[0].spacing
    eps = h / 3
    delta = sample("e2", ax, lambda x, y: np.exp(-(x * x + y * y) / (2 * eps * eps)))
    delta = delta.with_values(delta.values / (np.sum(delta.values) * h * h))
    out = group_convolve("e2", f, delta)
    assert np.max(np.abs(out.values - f.values)) < 1e-3


def test_flat_convolution_gaussians():
    ax = (Axis("x", -12.0, 12.0, 241),)
    f = sample("flat_r1", ax, lambda x: np.exp(-x * x / 2))
    h = group_convolve("flat_r1", f, f)
    ref = math.sqrt(math.pi) * np.exp(-ax[0].nodes() ** 2 / 4)
    assert np.max(np.abs(h.values - ref)) < 1e-10


def heis_oracle(f, g, x, grid):
    """Direct sum over y of f(x y^-1) g(y) with f evaluated in closed form."""
    names = [ax.name for ax in grid]
    Y = np.meshgrid(*[ax.nodes() for ax in grid], indexing="ij")
    w = np.prod([ax.spacing for ax in grid])
    yx, yy, yt = Y
    # x * y^-1 with y^-1 = (-y)
    zx, zy = x[0] - yx, x[1] - yy
    zt = x[2] - yt + (x[1] * (-yx) - x[0] * (-yy)) / 2
    return np.sum(f(zx, zy, zt) * g(yx, yy, yt)) * w


def test_heis_convolution_matches_direct_sum():
    grid = (Axis("x", -6.0, 6.0, 41), Axis("y", -6.0, 6.0, 41), Axis("t", -12.0, 12.0, 48, "periodic"))
    fa = lambda x, y, t: np.exp(-(x * x + y * y) / 2 - t * t / 2)
    ga = lambda x, y, t: np.exp(-(x * x + y * y) - t * t)
    f = sample("heis1", grid, fa)
    g = sample("heis1", grid, ga)
    h = group_convolve("heis1", f, g)
    nodes = [ax.nodes() for ax in grid]
    for idx in [(20, 20, 24), (23, 17, 26), (26, 22, 20)]:
        x = tuple(nodes[a][i] for a, i in enumerate(idx))
        assert abs(h.values[idx] - heis_oracle(fa, ga, x, grid)) < 1e-8


def test_u1c_convolution_matches_rotated_sum():
    # K-central operands: compare the DFT path with the generic rotation path
    ax = (periodic_theta(8),) + plane(6.0, 49)
    f = sample("u1_c", ax, lambda theta, x, y: np.exp(-(x * x + y * y) / 2) * (1 + 0.5 * np.cos(theta)), symmetry="K-central")
    g = sample("u1_c", ax, lambda theta, x, y: np.exp(-(x * x + y * y)) * (1 + 0.3 * np.sin(2 * theta)), symmetry="K-central")
    fast = group_convolve("u1_c", f, g)
    slow = group_convolve("u1_c", f, g.with_values(g.values, symmetry="none"))
    assert np.max(np.abs(fast.values - slow.values)) < 1e-6 * np.max(np.abs(fast.values))


@pytest.mark.parametrize("pair", ["e2", "heis1"])
def test_convolution_commutes_for_radial(pair):
    rng = np.random.default_rng(7)
    from gelfand.pipelines import random_radial

    f, g = random_radial(pair, rng), random_radial(pair, rng)
    assert verify_commutativity(pair, f, g, 1e-3).passed
    assert verify_commutativity(pair, f, f, 1e-15).observed == 0


def test_nonradial_fails_commutativity():
    ax = plane(6.0, 49)
    f = sample("e2", ax, lambda x, y: np.exp(-((x - 1.5) ** 2 + y * y)), symmetry="bi-K-invariant")
    g = sample("e2", ax, lambda x, y: np.exp(-(x * x + (y - 1.0) ** 2) / 2), symmetry="bi-K-invariant")
    # tags overridden: the direct oracle still sees non-radial data
    f2 = f.with_values(f.values, symmetry="none")
    rep = verify_commutativity("e2", f2, g.with_values(g.values, symmetry="none"), 1e-3, require_symmetry=False)
    assert rep.status == "fail"


def test_mismatched_grids():
    f = sample("e2", plane(6.0, 49), lambda x, y: np.exp(-(x * x + y * y)))
    g = sample("e2", plane(6.0, 51), lambda x, y: np.exp(-(x * x + y * y)))
    with pytest.raises(GridError):
        group_convolve("e2", f, g)


def test_truncation_warning():
    f = sample("e2", plane(2.0, 33), lambda x, y: np.exp(-(x * x + y * y) / 4))
    h = group_convolve("e2", f, f)
    assert "warnings" in h.meta


def test_boundary_check_skips_origin_face():
    f = sample("e2", (Axis("r", 0.0, 20.0, 50, "gauss"),), lambda r: np.exp(-r * r / 2))
    assert pairs._boundary_max(f.values, f.grid) < 1e-80
