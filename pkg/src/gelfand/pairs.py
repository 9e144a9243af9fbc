"""Concrete Gelfand pairs.

Four pairs share one contract (:class:`GelfandPair`):

``flat_r1``
    (R, {0}); characters ``exp(i lam x)`` embedded by ``xi = lam**2``.
``e2``
    (SO(2) x| R^2, SO(2)); radial profiles ``J_0(lam |v|)``, ``D = {-Lap}``.
``u1_c``
    (U(1) x| C, U(1)) as a strong pair; ``exp(i m theta) J_0(lam |z|)``,
    ``D = {-i d/dtheta, -Lap_z}``.
``heis1``
    (U(1) x| H_1, U(1)); Laguerre profiles on the fan plus ``J_0`` on the
    limit ray, ``D = {L, -i d/dt}`` with ``L`` the sublaplacian.

Haar measure on ``K x| H`` is normalized so that ``K`` has mass one and ``H``
carries Lebesgue measure.  Heisenberg product:
``(z, t)(z', t') = (z + z', t + t' + Im(z conj(z'))/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage, signal

from .errors import DomainError, GridError, ResolutionError, SymmetryError, UnsupportedPairError
from .sampling import Axis, SampledFunction, mesh
from .specfun import bessel_j, laguerre_function

__all__ = [
    "PairDescriptor",
    "GroupPoint",
    "SpectrumPoint",
    "GelfandPair",
    "get_pair",
    "PAIRS",
    "spherical",
    "eigenvalue_map",
    "spectrum_grid",
    "apply_generator",
    "group_convolve",
    "MAX_FD_STEP",
]

# Coarsest finite-difference step accepted for generator application.
MAX_FD_STEP = 1e-2

K_INVARIANT = ("bi-K-invariant", "K-central", "K-type")


@dataclass(frozen=True)
class PairDescriptor:
    id: str
    ell: int
    r: int
    generator_names: tuple
    strong: bool


@dataclass(frozen=True)
class GroupPoint:
    """A point ``(k_theta, h)`` of ``G = K x| H``.

    ``theta`` has one angle per torus coordinate of a strong pair (empty
    otherwise); ``z`` holds the H-coordinates (``(x,)``, ``(x, y)`` or
    ``(x, y, t)``).
    """

    theta: tuple = ()
    z: tuple = ()


@dataclass(frozen=True, eq=True)
class SpectrumPoint:
    xi: tuple
    params: dict = field(hash=False)

    def __hash__(self):
        return hash((self.xi, tuple(sorted(self.params.items()))))


def _finite(*vals):
    for v in vals:
        if not np.isfinite(v):
            raise DomainError(f"non-finite spectral parameter {v!r}")


def _as_int(v, name):
    if isinstance(v, bool) or int(v) != v:
        raise DomainError(f"{name} must be an integer, got {v!r}")
    return int(v)


def _planar_radius(coords):
    if "r" in coords:
        return np.abs(coords["r"])
    return np.hypot(coords.get("x", 0.0), coords.get("y", 0.0))


# ---------------------------------------------------------------------------
# finite differences on sampled grids


def _roll_diff(v, axis, h, order, periodic):
    if order == 1:
        d = (np.roll(v, -1, axis) - np.roll(v, 1, axis)) / (2 * h)
    else:
        d = (np.roll(v, -1, axis) - 2 * v + np.roll(v, 1, axis)) / (h * h)
    if not periodic:
        d = d.copy()
        idx = [slice(None)] * v.ndim
        idx[axis] = [0, v.shape[axis] - 1]
        d[tuple(idx)] = np.nan
    return d


class _FD:
    """Central differences on the uniform axes of a sampled function."""

    def __init__(self, f: SampledFunction, step: float, axes_used: Sequence[str]):
        if not step > 0:
            raise ResolutionError("finite-difference step must be positive")
        if step > MAX_FD_STEP:
            raise ResolutionError(f"finite-difference step {step} exceeds {MAX_FD_STEP}; grid too coarse")
        self.f = f
        self.v = f.values
        self.idx = {ax.name: i for i, ax in enumerate(f.grid)}
        for name in axes_used:
            ax = f.axis(name)
            if ax.kind == "gauss":
                raise GridError(f"axis {name} must be equispaced for finite differences")
            if not math.isclose(ax.spacing, step, rel_tol=1e-9):
                raise GridError(f"axis {name} spacing {ax.spacing} does not match step {step}")
            if ax.kind == "uniform" and ax.n < 3:
                raise ResolutionError(f"axis {name} needs at least 3 nodes")
        self.h = step

    def _periodic(self, name):
        return self.f.axis(name).kind == "periodic"

    def d(self, name, order=1, v=None):
        v = self.v if v is None else v
        return _roll_diff(v, self.idx[name], self.h, order, self._periodic(name))

    def dd(self, a, b):
        return self.d(b, 1, self.d(a, 1))


class GelfandPair:
    """Contract every concrete pair implements."""

    descriptor: PairDescriptor
    # H-coordinate names, in GroupPoint.z order
    h_coords: tuple = ()

    @property
    def id(self):
        return self.descriptor.id

    # --- spectrum ---------------------------------------------------------
    def validate(self, params: dict) -> dict:
        raise NotImplementedError

    def eigenvalues(self, params: dict) -> tuple:
        raise NotImplementedError

    def point(self, **params) -> SpectrumPoint:
        params = self.validate(dict(params))
        return SpectrumPoint(tuple(float(v) for v in self.eigenvalues(params)), params)

    def spectrum_grid(self, bounds: dict) -> list:
        raise NotImplementedError

    # --- functions on G -----------------------------------------------------
    def phi(self, sigma: SpectrumPoint, **coords):
        """Spherical function at chart coordinates (broadcasting arrays)."""
        raise NotImplementedError

    def coords(self, x: GroupPoint) -> dict:
        out = {name: x.z[i] for i, name in enumerate(self.h_coords)}
        if self.descriptor.r:
            out["theta"] = x.theta[0]
        return out

    def coord_arrays(self, points: Sequence[GroupPoint]) -> dict:
        out = {name: np.array([float(p.z[i]) for p in points]) for i, name in enumerate(self.h_coords)}
        if self.descriptor.r:
            out["theta"] = np.array([float(p.theta[0]) for p in points])
        return out

    def identity(self) -> GroupPoint:
        return GroupPoint(theta=(0.0,) * self.descriptor.r, z=(0.0,) * len(self.h_coords))

    def multiply(self, x: GroupPoint, y: GroupPoint) -> GroupPoint:
        raise NotImplementedError

    def inverse(self, x: GroupPoint) -> GroupPoint:
        raise NotImplementedError

    def generator(self, j: int, f: SampledFunction, step: float):
        raise NotImplementedError

    def convolve(self, f: SampledFunction, g: SampledFunction) -> SampledFunction:
        raise NotImplementedError

    def weight(self, **coords):
        """Smooth surrogate ``1 + |x|`` for the word length."""
        return 1.0 + _planar_radius(coords) if "x" in coords or "r" in coords else 1.0

    def __repr__(self):
        return f"<pair {self.id}>"


def _lambda_params(params):
    lam = float(params.get("lambda", 0.0))
    _finite(lam)
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    return {"lambda": lam}


class FlatR1(GelfandPair):
    descriptor = PairDescriptor("flat_r1", 1, 0, ("-Lap",), False)
    h_coords = ("x",)

    def validate(self, params):
        return _lambda_params(params)

    def eigenvalues(self, params):
        return (params["lambda"] ** 2,)

    def spectrum_grid(self, bounds):
        return [self.point(**{"lambda": lam}) for lam in bounds.get("lambda", ())]

    def phi(self, sigma, x=0.0, **_):
        return np.exp(1j * sigma.params["lambda"] * np.asarray(x))

    def multiply(self, a, b):
        return GroupPoint((), (a.z[0] + b.z[0],))

    def inverse(self, a):
        return GroupPoint((), (-a.z[0],))

    def generator(self, j, f, step):
        if j != 1:
            raise DomainError(f"flat_r1 has a single generator, got j={j}")
        fd = _FD(f, step, ("x",))
        return -fd.d("x", 2)

    def convolve(self, f, g):
        _check_conv_grids(f, g, ("x",))
        h = f.grid[0].spacing
        vals = np.convolve(f.values, g.values, mode="same") * h
        return _conv_result(f, g, vals)

    def weight(self, x=0.0, **_):
        return 1.0 + np.abs(x)


class E2(GelfandPair):
    descriptor = PairDescriptor("e2", 1, 0, ("-Lap",), False)
    h_coords = ("x", "y")

    def validate(self, params):
        return _lambda_params(params)

    def eigenvalues(self, params):
        return (params["lambda"] ** 2,)

    def spectrum_grid(self, bounds):
        return [self.point(**{"lambda": lam}) for lam in bounds.get("lambda", ())]

    def phi(self, sigma, **coords):
        return np.asarray(bessel_j(0, sigma.params["lambda"] * _planar_radius(coords)), dtype=complex)

    def multiply(self, a, b):
        return GroupPoint((), (a.z[0] + b.z[0], a.z[1] + b.z[1]))

    def inverse(self, a):
        return GroupPoint((), (-a.z[0], -a.z[1]))

    def generator(self, j, f, step):
        if j != 1:
            raise DomainError(f"e2 has a single generator, got j={j}")
        fd = _FD(f, step, ("x", "y"))
        return -(fd.d("x", 2) + fd.d("y", 2))

    def convolve(self, f, g):
        _check_conv_grids(f, g, ("x", "y"))
        gbar = g.values if g.symmetry in K_INVARIANT else _k_average(g.values, f.grid)
        vals = _planar_conv(f.values, gbar, f.grid)
        return _conv_result(f, g, vals)


class U1C(GelfandPair):
    """(U(1) x| C, U(1)); ``(a, z)(b, w) = (a + b, z + e^{ia} w)``."""

    descriptor = PairDescriptor("u1_c", 2, 1, ("-i d/dtheta", "-Lap_z"), True)
    h_coords = ("x", "y")

    def validate(self, params):
        out = _lambda_params(params)
        out["m"] = _as_int(params.get("m", 0), "m")
        return out

    def eigenvalues(self, params):
        return (float(params["m"]), params["lambda"] ** 2)

    def spectrum_grid(self, bounds):
        ms = bounds.get("m", ())
        lams = bounds.get("lambda", ())
        return [self.point(m=m, **{"lambda": lam}) for m in ms for lam in lams]

    def phi(self, sigma, theta=0.0, **coords):
        p = sigma.params
        return np.exp(1j * p["m"] * np.asarray(theta)) * bessel_j(0, p["lambda"] * _planar_radius(coords))

    def multiply(self, a, b):
        c, s = math.cos(a.theta[0]), math.sin(a.theta[0])
        bx, by = b.z
        return GroupPoint(
            ((a.theta[0] + b.theta[0]) % (2 * math.pi),),
            (a.z[0] + c * bx - s * by, a.z[1] + s * bx + c * by),
        )

    def inverse(self, a):
        c, s = math.cos(a.theta[0]), math.sin(a.theta[0])
        x, y = a.z
        # -e^{-i theta} z
        return GroupPoint(((-a.theta[0]) % (2 * math.pi),), (-(c * x + s * y), -(-s * x + c * y)))

    def generator(self, j, f, step):
        if j == 1:
            fd = _FD(f, step, ("theta",))
            return -1j * fd.d("theta", 1)
        if j == 2:
            fd = _FD(f, step, ("x", "y"))
            return -(fd.d("x", 2) + fd.d("y", 2))
        raise DomainError(f"u1_c generators are j=1,2, got j={j}")

    def convolve(self, f, g):
        if "theta" not in f.names:
            # bi-K-invariant functions viewed on G/K = C: same as e2
            _check_conv_grids(f, g, ("x", "y"))
            gbar = g.values if g.symmetry in K_INVARIANT else _k_average(g.values, f.grid)
            return _conv_result(f, g, _planar_conv(f.values, gbar, f.grid))
        _check_conv_grids(f, g, ("theta", "x", "y"))
        th = f.axis("theta")
        if th.kind != "periodic" or not math.isclose(th.max - th.min, 2 * math.pi):
            raise GridError("u1_c convolution needs a periodic theta axis over [0, 2pi)")
        n = th.n
        plane = f.grid[1:]
        if g.symmetry in K_INVARIANT:
            # no rotation needed: the theta sum is a cyclic convolution,
            # diagonalized by the DFT along theta
            Fh = np.fft.fft(f.values, axis=0)
            Gh = np.fft.fft(g.values, axis=0)
            out = np.stack([_planar_conv(Fh[k], Gh[k], plane) for k in range(n)])
            out = np.fft.ifft(out, axis=0) / n
            return _conv_result(f, g, out)
        angles = th.nodes()
        out = np.zeros_like(f.values)
        for i in range(n):
            acc = np.zeros(f.values.shape[1:], dtype=complex)
            for jj in range(n):
                gv = _rotate(g.values[jj], angles[jj] - angles[i], plane)
                acc += _planar_conv(f.values[(i - jj) % n], gv, plane)
            out[i] = acc / n
        return _conv_result(f, g, out)


class Heis1(GelfandPair):
    """(U(1) x| H_1, U(1)) as an ordinary Gelfand pair."""

    descriptor = PairDescriptor("heis1", 2, 0, ("L", "-i d/dt"), False)
    h_coords = ("x", "y", "t")

    def validate(self, params):
        branch = params.get("branch", "ray" if "eta" in params else "fan")
        if branch == "fan":
            lam = float(params.get("lambda", 0.0))
            _finite(lam)
            k = _as_int(params.get("k", 0), "k")
            if k < 0:
                raise DomainError(f"k must be >= 0, got {k}")
            return {"branch": "fan", "lambda": lam, "k": k}
        if branch == "ray":
            eta = float(params.get("eta", 0.0))
            _finite(eta)
            if eta < 0:
                raise DomainError(f"eta must be >= 0, got {eta}")
            return {"branch": "ray", "eta": eta}
        raise DomainError(f"unknown heis1 branch {branch!r}")

    def eigenvalues(self, params):
        if params["branch"] == "fan":
            lam = params["lambda"]
            return (abs(lam) * (2 * params["k"] + 1), lam)
        return (params["eta"] ** 2, 0.0)

    def spectrum_grid(self, bounds):
        lams = list(bounds.get("lambda", ()))
        kmax = bounds.get("kmax")
        pts = []
        if kmax is not None:
            for k in range(int(kmax) + 1):
                pts.extend(self.point(branch="fan", k=k, **{"lambda": lam}) for lam in lams)
        etas = bounds.get("eta")
        if etas is None:
            etas = sorted({abs(float(lam)) for lam in lams})
        pts.extend(self.point(branch="ray", eta=eta) for eta in etas)
        return pts

    def phi(self, sigma, t=0.0, **coords):
        p = sigma.params
        rho = _planar_radius(coords)
        if p["branch"] == "ray":
            return bessel_j(0, p["eta"] * rho) * np.ones_like(np.asarray(t, dtype=float)) + 0j
        lam = p["lambda"]
        prof = laguerre_function(p["k"], 0.5 * abs(lam) * np.asarray(rho, dtype=float) ** 2)
        return np.exp(1j * lam * np.asarray(t)) * prof

    def multiply(self, a, b):
        x, y, t = a.z
        u, v, s = b.z
        return GroupPoint((), (x + u, y + v, t + s + (y * u - x * v) / 2))

    def inverse(self, a):
        x, y, t = a.z
        return GroupPoint((), (-x, -y, -t))

    def generator(self, j, f, step):
        if j == 1:
            fd = _FD(f, step, ("x", "y", "t"))
            c = f.mesh()
            x, y = c["x"], c["y"]
            lap = fd.d("x", 2) + fd.d("y", 2)
            return -(lap + y * fd.dd("x", "t") - x * fd.dd("y", "t") + 0.25 * (x * x + y * y) * fd.d("t", 2))
        if j == 2:
            fd = _FD(f, step, ("t",))
            return -1j * fd.d("t", 1)
        raise DomainError(f"heis1 generators are j=1,2, got j={j}")

    def convolve(self, f, g):
        _check_conv_grids(f, g, ("x", "y", "t"))
        tax = f.axis("t")
        if tax.kind != "periodic":
            raise GridError("heis1 convolution needs a periodic t axis")
        gbar = g.values
        if g.symmetry not in K_INVARIANT:
            gbar = np.stack([_k_average(g.values[:, :, i], f.grid[:2]) for i in range(tax.n)], axis=-1)
        vals = _twisted_conv(f.values, gbar, f.grid)
        return _conv_result(f, g, vals)

    def weight(self, x=0.0, y=0.0, t=0.0, r=None, **_):
        rho2 = r**2 if r is not None else x**2 + y**2
        return 1.0 + (rho2**2 + np.asarray(t) ** 2) ** 0.25


PAIRS = {p.descriptor.id: p for p in (FlatR1(), E2(), U1C(), Heis1())}


def get_pair(pair) -> GelfandPair:
    if isinstance(pair, GelfandPair):
        return pair
    if isinstance(pair, PairDescriptor):
        pair = pair.id
    try:
        return PAIRS[pair]
    except KeyError:
        raise UnsupportedPairError(f"unknown pair {pair!r}; choose from {sorted(PAIRS)}") from None


# ---------------------------------------------------------------------------
# convolution helpers


def _check_conv_grids(f, g, names):
    if f.pair != g.pair:
        raise GridError(f"cannot convolve functions on {f.pair} and {g.pair}")
    if f.grid != g.grid:
        raise GridError("convolution operands must share a grid")
    if f.names != names:
        raise GridError(f"convolution needs axes {names}, got {f.names}")
    for ax in f.grid:
        if ax.name == "theta":
            continue
        if ax.kind == "gauss":
            raise GridError(f"axis {ax.name} must be equispaced for convolution")
        if ax.kind == "uniform" and (ax.n % 2 == 0 or not math.isclose(ax.min, -ax.max)):
            raise GridError(f"axis {ax.name} must be symmetric about 0 with an odd node count")


def _boundary_max(v, grid):
    """Largest |value| on the non-periodic faces of the grid."""
    worst = 0.0
    for i, ax in enumerate(grid):
        if ax.kind == "periodic" and ax.name == "theta":
            continue
        # r = 0 is the origin, not a truncation face
        for edge in ((-1,) if ax.name == "r" and ax.min <= 0 else (0, -1)):
            idx = [slice(None)] * v.ndim
            idx[i] = edge
            worst = max(worst, float(np.max(np.abs(v[tuple(idx)]))))
    return worst


def _conv_result(f, g, vals):
    meta = {}
    scale = max(float(np.max(np.abs(f.values))), float(np.max(np.abs(g.values))), 1e-300)
    edge = max(_boundary_max(f.values, f.grid), _boundary_max(g.values, g.grid)) / scale
    if edge > 1e-12:
        meta["warnings"] = [f"operands do not decay at the truncation boundary (relative edge value {edge:.2e})"]
    sym = "none"
    ktype = None
    if f.symmetry == g.symmetry == "bi-K-invariant":
        sym = "bi-K-invariant"
    elif f.symmetry in K_INVARIANT and g.symmetry in K_INVARIANT:
        sym = "K-central"
        if f.symmetry == g.symmetry == "K-type" and f.ktype == g.ktype:
            sym, ktype = "K-type", f.ktype
    return SampledFunction(f.pair, f.grid, vals, symmetry=sym, ktype=ktype, truncation=f.truncation, meta=meta)


def _planar_conv(F, G, plane):
    """``sum_w F(v - w) G(w) dA`` on a centered grid (evaluated by FFT)."""
    hx, hy = plane[0].spacing, plane[1].spacing
    return signal.fftconvolve(F, G, mode="same") * (hx * hy)


def _rotate(values, alpha, plane):
    """``values(R_alpha v)`` on the same Cartesian grid (quintic splines)."""
    ax, ay = plane[0], plane[1]
    X, Y = np.meshgrid(ax.nodes(), ay.nodes(), indexing="ij")
    c, s = math.cos(alpha), math.sin(alpha)
    xr = c * X - s * Y
    yr = s * X + c * Y
    ix = (xr - ax.min) / ax.spacing
    iy = (yr - ay.min) / ay.spacing
    coords = np.array([ix, iy])
    re = ndimage.map_coordinates(values.real, coords, order=5, mode="constant", cval=0.0)
    im = ndimage.map_coordinates(values.imag, coords, order=5, mode="constant", cval=0.0)
    return re + 1j * im


def _k_average(values, plane, n_angles=64):
    acc = np.zeros_like(values, dtype=complex)
    for a in 2 * np.pi * np.arange(n_angles) / n_angles:
        acc += _rotate(values, a, plane)
    return acc / n_angles


def _twisted_conv(F, G, grid):
    """Convolution on H_1 sampled on (x, y, t) with periodic t.

    The t-variable is handled spectrally (the center shift is not a grid
    multiple); the z-variable by the direct twisted sum
    ``sum_w F^lam(z - w) G^lam(w) exp(-i lam Im(z conj w) / 2)``.
    """
    ax, ay, at = grid
    nx, ny, nt = F.shape
    hx, hy, ht = ax.spacing, ay.spacing, at.spacing
    x, y, t = ax.nodes(), ay.nodes(), at.nodes()
    lam = 2 * np.pi * np.fft.fftfreq(nt, d=ht)
    phase = np.exp(-1j * np.outer(t, lam))  # (nt, nlam)
    Fl = np.tensordot(F, phase, axes=([2], [0])) * ht  # (nx, ny, nlam)
    Gl = np.tensordot(G, phase, axes=([2], [0])) * ht
    cx = (nx - 1) // 2
    cy = (ny - 1) // 2
    # Fpad[a - c, b - d] with zero padding
    Fpad = np.zeros((3 * nx, 3 * ny, nt), dtype=complex)
    Fpad[nx : 2 * nx, ny : 2 * ny] = Fl
    bidx = np.arange(ny)[:, None] - np.arange(ny)[None, :] + cy + ny  # (b, d)
    out_l = np.zeros((nx, ny, nt), dtype=complex)
    for li in range(nt):
        L = lam[li]
        if L == 0:
            ph_a_d = np.ones((nx, ny))
            ph_b_c = np.ones((ny, nx))
        else:
            ph_a_d = np.exp(0.5j * L * np.outer(x, y))  # e^{i L x_a y_d / 2}
            ph_b_c = np.exp(-0.5j * L * np.outer(y, x))  # e^{-i L y_b x_c / 2}
        Fp = Fpad[:, :, li]
        acc = np.zeros((nx, ny), dtype=complex)
        for c in range(nx):
            Hc = Gl[c, :, li][None, :] * ph_a_d  # (a, d)
            rows = np.arange(nx) - c + cx + nx
            Fm = Fp[rows][:, bidx]  # (a, b, d)
            Tc = np.einsum("abd,ad->ab", Fm, Hc)
            acc += Tc * ph_b_c[:, c][None, :]
        out_l[:, :, li] = acc * hx * hy
    inv = np.exp(1j * np.outer(lam, t))  # (nlam, nt)
    return np.tensordot(out_l, inv, axes=([2], [0])) / (nt * ht)


# ---------------------------------------------------------------------------
# module-level operations


def spherical(pair, sigma: SpectrumPoint, x: GroupPoint) -> complex:
    """Value of the bounded spherical function ``sigma`` at ``x``."""
    p = get_pair(pair)
    p.validate(dict(sigma.params))
    return complex(np.asarray(p.phi(sigma, **p.coords(x))).ravel()[0])


def eigenvalue_map(pair, params: dict | None = None, **kw) -> SpectrumPoint:
    p = get_pair(pair)
    merged = dict(params or {})
    merged.update(kw)
    return p.point(**merged)


def spectrum_grid(pair, bounds: dict) -> list:
    """Deterministic enumeration of spectrum points.

    ``bounds`` keys: ``lambda`` (iterable), ``m`` (u1_c), ``kmax`` and
    ``eta`` (heis1).  Missing or empty ranges give an empty list.
    """
    return get_pair(pair).spectrum_grid(bounds)


def apply_generator(pair, j: int, f: SampledFunction, step: float) -> SampledFunction:
    """Finite-difference application of ``D_j``; boundary ring set to NaN."""
    p = get_pair(pair)
    if f.pair != p.id:
        raise GridError(f"function lives on {f.pair}, not {p.id}")
    vals = p.generator(j, f, step)
    return f.with_values(vals, symmetry=f.symmetry)


def group_convolve(pair, f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """``(f * g)(x) = int_G f(x y^{-1}) g(y) dy`` by quadrature on the grid.

    Operands tagged with a K-invariant symmetry are used as-is; otherwise the
    K-action is applied numerically (spline rotation), which is what makes
    the result sensitive to non-invariant data.
    """
    p = get_pair(pair)
    if f.pair != p.id or g.pair != p.id:
        raise GridError(f"operands must live on {p.id}")
    return p.convolve(f, g)


def cartesian_axis(name, half_width, n, kind="uniform"):
    if kind == "periodic":
        return Axis(name, -half_width, half_width, n, "periodic")
    return Axis(name, -half_width, half_width, n, kind)
