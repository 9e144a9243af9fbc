"""Schwartz seminorms, lattice bump interpolation and decay checks.

Group seminorms use the smooth weight ``w(x)`` of :meth:`GelfandPair.weight`
in place of ``1 + |x|`` and left-invariant frames:

* ``flat_r1``: ``d/dx``; ``e2``: ``d/dx, d/dy`` (section ``theta = 0``)
* ``u1_c``: ``d/dtheta``, ``cos(theta) d/dx + sin(theta) d/dy``,
  ``-sin(theta) d/dx + cos(theta) d/dy``
* ``heis1``: ``X = d/dx + (y/2) d/dt``, ``Y = d/dy - (x/2) d/dt``, ``T = d/dt``

Derivatives are central differences with a stride of ``step / spacing``
nodes (spectral along a periodic theta axis); monomials are ordered,
``X^a = X_1^{a_1} X_2^{a_2} ...``.

On the spectral side the type-``m`` slice of ``u1_c`` is parametrized by
``xi'' = lambda**2 >= 0``; Euclidean seminorms there use one-sided
differences at ``xi'' = 0``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DecayError, DomainError, GridError, ResolutionError, SpecError, SymmetryError, UnsupportedPairError
from .ktype import decompose, project_ktype, xi_prime_map
from .pairs import get_pair
from .reports import _plain
from .sampling import Axis, GridFunction, SampledFunction, mesh
from .transform import spherical_transform

__all__ = [
    "BumpSpec",
    "SeminormReport",
    "SeminormTable",
    "group_seminorm",
    "euclid_seminorm",
    "bump_interpolate",
    "bump_constant",
    "seminorm_table",
    "fit_decay",
    "verify_decay",
    "diagonal_select",
    "schwartz_extend",
    "change_of_generators",
    "LATTICE_SPACING",
    "DECAY_MARGIN",
]

MAX_ORDER = 4
# Sub-lattice spacing for interpolants; a power of two keeps integers exact.
LATTICE_SPACING = 1.0 / 64
DECAY_MARGIN = 0.2
NOISE_FLOOR = 1e-12
TAIL_LIMIT = 1e-8


# ---------------------------------------------------------------------------
# seminorms


def _multi_indices(d, N):
    return [a for n in range(N + 1) for a in itertools.product(range(n + 1), repeat=d) if sum(a) == n]


def _fd(v, axis, stride, h):
    d = (np.roll(v, -stride, axis) - np.roll(v, stride, axis)) / (2 * stride * h)
    idx = [slice(None)] * v.ndim
    idx[axis] = list(range(stride)) + list(range(v.shape[axis] - stride, v.shape[axis]))
    d[tuple(idx)] = np.nan
    return d


def _spectral(v, axis, period):
    n = v.shape[axis]
    k = np.fft.fftfreq(n, d=1.0 / n) * (2 * math.pi / period)
    if n % 2 == 0:
        k[n // 2] = 0.0
    shape = [1] * v.ndim
    shape[axis] = n
    return np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(v, axis=axis), axis=axis)


class _Derivs:
    def __init__(self, f: SampledFunction, step, mult):
        self.f = f
        self.ax = {a.name: i for i, a in enumerate(f.grid)}
        self.stride = {}
        for a in f.grid:
            if a.kind == "gauss":
                raise GridError(f"axis {a.name} must be equispaced for seminorms")
            if a.kind == "periodic" and a.name == "theta":
                continue
            s = step / a.spacing
            if abs(s - round(s)) > 1e-9 * max(1.0, s) or round(s) < 1:
                raise GridError(f"step {step} is not a positive multiple of the {a.name} spacing {a.spacing}")
            self.stride[a.name] = int(round(s)) * mult

    def d(self, name, v):
        a = self.f.axis(name)
        i = self.ax[name]
        if name not in self.stride:
            return _spectral(v, i, a.max - a.min)
        return _fd(v, i, self.stride[name], a.spacing)


def _frame(p, f):
    names = f.names
    c = f.mesh()
    if p.id == "flat_r1":
        return [lambda v, D: D.d("x", v)]
    if p.id == "heis1":
        x, y = c["x"], c["y"]
        return [
            lambda v, D: D.d("x", v) + 0.5 * y * D.d("t", v),
            lambda v, D: D.d("y", v) - 0.5 * x * D.d("t", v),
            lambda v, D: D.d("t", v),
        ]
    if p.id in ("e2", "u1_c") and "theta" not in names:
        return [lambda v, D: D.d("x", v), lambda v, D: D.d("y", v)]
    if p.id == "u1_c":
        cs, sn = np.cos(c["theta"]), np.sin(c["theta"])
        return [
            lambda v, D: D.d("theta", v),
            lambda v, D: cs * D.d("x", v) + sn * D.d("y", v),
            lambda v, D: -sn * D.d("x", v) + cs * D.d("y", v),
        ]
    raise UnsupportedPairError(f"no frame for {p.id} on axes {names}")


MAX_NODE_JUMP = 0.5


def _check_sampling(D, v):
    """Central differences alias to ~0 when values jump across one stencil step."""
    scale = float(np.max(np.abs(v)))
    for name, stride in D.stride.items():
        i = D.ax[name]
        n = v.shape[i]
        if n <= stride:
            continue
        a = np.take(v, range(stride, n), axis=i)
        b = np.take(v, range(0, n - stride), axis=i)
        if float(np.max(np.abs(a - b))) > MAX_NODE_JUMP * scale:
            raise ResolutionError(f"values change by more than {MAX_NODE_JUMP:.0%} of their size across one {name} step; refine the grid")


def _group_sup(p, f, N, step, mult):
    D = _Derivs(f, step, mult)
    if N > 0 and mult == 1:
        _check_sampling(D, f.values)
    frame = _frame(p, f)
    w = np.asarray(p.weight(**f.mesh()), dtype=float) ** N
    cache = {}
    best = 0.0
    for a in _multi_indices(len(frame), N):
        if sum(a) == 0:
            v = f.values
        else:
            j = next(i for i, ai in enumerate(a) if ai)
            prev = tuple(ai - (i == j) for i, ai in enumerate(a))
            v = frame[j](cache[prev], D)
        cache[a] = v
        val = np.abs(v) * w
        if np.all(np.isnan(val)):
            raise ResolutionError("grid too small for the requested derivative order")
        best = max(best, float(np.nanmax(val)))
    return best


def group_seminorm(pair, f: SampledFunction, N: int, step: float) -> float:
    """``sup_x max_{|a| <= N} w(x)^N |X^a f(x)|`` over the grid.

    The estimate is repeated with twice the step; if the Richardson error
    estimate exceeds 10% of the value the grid is judged too coarse.

    Raises
    ------
    ResolutionError
        On coarse grids or when the derivative stencil does not fit.
    """
    p = get_pair(pair)
    if not 0 <= N <= MAX_ORDER:
        raise DomainError(f"N must be in 0..{MAX_ORDER}")
    if f.pair != p.id:
        raise GridError(f"function lives on {f.pair}, not {p.id}")
    s1 = _group_sup(p, f, N, step, 1)
    if N == 0 or s1 == 0:
        return s1
    s2 = _group_sup(p, f, N, step, 2)
    if abs(s1 - s2) / 3 > 0.1 * s1:
        raise ResolutionError(f"seminorm not resolved at step {step}: {s1:.4g} vs {s2:.4g} at twice the step")
    return s1


def _euclid_derivs(u: GridFunction, N):
    h = [ax.spacing for ax in u.axes]
    d = len(u.axes)
    cache = {(0,) * d: np.asarray(u.values)}
    for a in _multi_indices(d, N):
        if sum(a) == 0:
            continue
        j = next(i for i, ai in enumerate(a) if ai)
        prev = tuple(ai - (i == j) for i, ai in enumerate(a))
        v = cache[prev]
        if v.shape[j] < 3:
            raise ResolutionError("need at least 3 nodes per axis for derivatives")
        cache[a] = np.gradient(v, h[j], axis=j, edge_order=2)
    return cache


def euclid_seminorm(u: GridFunction, N: int) -> float:
    """``sup (1 + |xi|)^N |d^a u|`` over ``|a| <= N`` on a uniform grid."""
    if not 0 <= N <= MAX_ORDER:
        raise DomainError(f"N must be in 0..{MAX_ORDER}")
    w = (1.0 + u.norm_mesh()) ** N
    return max(float(np.max(np.abs(v) * w)) for v in _euclid_derivs(u, N).values())


# ---------------------------------------------------------------------------
# bump interpolation


@dataclass(frozen=True)
class BumpSpec:
    """``eta(t) = exp(1 - 1 / (1 - |t / radius|^2))`` inside the ball, 0 outside."""

    radius: float = 1.0 / 3.0
    profile: str = "exp-rational"

    def __post_init__(self):
        if not 0 < self.radius < 0.5:
            raise SpecError(f"bump radius must lie in (0, 1/2), got {self.radius}")
        if self.profile != "exp-rational":
            raise SpecError(f"unknown bump profile {self.profile!r}")

    def __call__(self, t):
        """Evaluate at ``t``; pass ``|t|`` for points of R^r, r > 1."""
        t = np.asarray(t, dtype=float)
        s2 = (t / self.radius) ** 2
        out = np.zeros(np.shape(s2))
        inside = s2 < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s2[inside]))
        return out if out.ndim else float(out)


def _lattice_axis(name, lo, hi, spacing):
    n = int(round((hi - lo) / spacing)) + 1
    return Axis(name, float(lo), float(hi), n)


def _stencil(spec, spacing):
    k = int(math.ceil(spec.radius / spacing))
    offs = np.arange(-k, k + 1)
    return offs, spec(offs * spacing)


def bump_interpolate(a: dict, spec: BumpSpec = BumpSpec(), spacing: float = LATTICE_SPACING, pad: int = 1) -> GridFunction:
    """``h(t) = sum_m a(m) eta(t - m)`` on a sub-lattice grid.

    ``a`` maps integers (``r = 1``) or integer pairs (``r = 2``) to reals.
    The grid spans the support of ``a`` plus ``pad`` on each side with
    ``1/spacing`` an integer, so every lattice point is a grid node and
    ``h(m) = a(m)`` holds exactly.
    """
    if not isinstance(spec, BumpSpec):
        raise SpecError("spec must be a BumpSpec")
    inv = 1.0 / spacing
    if abs(inv - round(inv)) > 1e-12:
        raise GridError("1/spacing must be an integer so that lattice points are nodes")
    if not a:
        raise DomainError("empty lattice function")
    keys = [tuple(np.atleast_1d(k).astype(int)) for k in a]
    r = len(keys[0])
    if r not in (1, 2) or any(len(k) != r for k in keys):
        raise DomainError("lattice keys must all be integers or all integer pairs")
    per = int(round(inv))
    axes = []
    for i in range(r):
        lo = min(k[i] for k in keys) - pad
        hi = max(k[i] for k in keys) + pad
        axes.append(_lattice_axis(f"xi{i + 1}", lo, hi, spacing))
    vals = np.zeros(tuple(ax.n for ax in axes))
    offs, st = _stencil(spec, spacing)
    if r == 2:
        o1, o2 = np.meshgrid(offs, offs, indexing="ij")
        st = spec(np.hypot(o1 * spacing, o2 * spacing))
    for key, val in zip(keys, a.values()):
        if val == 0:
            continue
        centre = [(key[i] - int(round(axes[i].min))) * per for i in range(r)]
        if r == 1:
            vals[centre[0] + offs] += val * st
        else:
            vals[np.ix_(centre[0] + offs, centre[1] + offs)] += val * st
    return GridFunction(tuple(axes), vals)


def bump_constant(spec: BumpSpec, N: int, spacing: float = LATTICE_SPACING, r: int = 1) -> float:
    """``A_N = ||eta||_(N) * c_r`` with overlap count ``c_r = 1``."""
    gf = bump_interpolate({(0,) * r if r > 1 else 0: 1.0}, spec, spacing)
    return euclid_seminorm(gf, N)


# ---------------------------------------------------------------------------
# decay of per-type transforms


@dataclass
class SeminormReport:
    N: int
    value: float
    per_type: dict
    slope: float | None
    constants: list
    status: str
    M: int | None = None
    details: dict = field(default_factory=dict)
    pair: str | None = None

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        return _plain(
            {
                "check": "decay",
                "pair": self.pair,
                # the fitted slope is compared against -M + margin
                "tolerance": self.details.get("threshold"),
                "observed": self.slope,
                "N": self.N,
                "M": self.M,
                "value": self.value,
                "per_type": {str(k): v for k, v in self.per_type.items()},
                "slope": self.slope,
                "constants": self.constants,
                "status": self.status,
                "pass": self.passed,
                "details": self.details,
            }
        )


@dataclass
class SeminormTable:
    """Per-type transforms on a uniform ``xi''`` grid and their seminorms."""

    pair: str
    xi2: Axis
    g: dict  # m -> complex array over xi2
    values: dict  # m -> {N: seminorm}
    relative_tail: float
    types: dict = field(default_factory=dict)  # m -> KTypeIndex

    @property
    def Nmax(self):
        return max(next(iter(self.values.values())))

    def rows(self):
        ms = sorted(self.values, key=lambda m: (abs(m), m))
        return [(m, self.types[m].norm, *[self.values[m][n] for n in range(self.Nmax + 1)]) for m in ms]


def _xi2_axis(xi2_max, n):
    return Axis("xi2", 0.0, float(xi2_max), int(n))


def seminorm_table(pair, f: SampledFunction, Nmax: int, Mmax_types: int, xi2_max=60.0, n_xi2=601) -> SeminormTable:
    """Project ``f`` on types ``|m| <= Mmax_types``, transform, and tabulate seminorms."""
    p = get_pair(pair)
    if not p.descriptor.strong:
        raise UnsupportedPairError(f"{p.id} has no K-type slices")
    if f.symmetry not in ("K-central", "K-type", "bi-K-invariant"):
        raise SymmetryError("decay checks need a K-central function")
    if not 0 <= Nmax <= 3:
        raise DomainError("N must be in 0..3")
    ax = _xi2_axis(xi2_max, n_xi2)
    lam = np.sqrt(ax.nodes())
    dec = decompose(p, f, Mmax_types)
    g, values, types = {}, {}, {}
    for k, fm in dec.components:
        m = k.m[0]
        pts = [p.point(m=m, **{"lambda": float(l)}) for l in lam]
        if fm.symmetry == "bi-K-invariant" and m != 0:
            continue
        vals = spherical_transform(p, fm, pts).values
        g[m] = vals
        gf = GridFunction((ax,), vals)
        values[m] = {n: euclid_seminorm(gf, n) for n in range(Nmax + 1)}
        types[m] = k
    rel_tail = dec.tail_norm / dec.norm if dec.norm > 0 else 0.0
    return SeminormTable(p.id, ax, g, values, rel_tail, types)


def fit_decay(table: SeminormTable, N: int, M: int, margin=DECAY_MARGIN) -> SeminormReport:
    """Fit ``log ||g_m||_(N)`` against ``log(1 + |xi'_m|)`` on the tail of types.

    Types at the noise floor are dropped; the fit uses ``|m| >= M_types / 4``
    when that leaves at least two types.  A slope above ``-M + margin`` is
    a failure; a passing fit with a heavy untabulated tail is inconclusive.
    """
    per = {m: table.values[m][N] for m in table.values}
    top = max(per.values()) if per else 0.0
    live = {m: v for m, v in per.items() if v > NOISE_FLOOR * top}
    norms = {m: table.types[m].norm for m in per}
    constants = [[max((1 + norms[m]) ** Mt * v for m, v in per.items()), Mt] for Mt in range(0, 5)]
    details = {"relative_tail": table.relative_tail, "types": len(per), "types_fitted": 0}
    if all(norms[m] == 0 for m in live):
        return SeminormReport(N, top, per, None, constants, "pass", M, {**details, "vacuous": True}, table.pair)
    mmax = max(norms.values())
    use = {m: v for m, v in live.items() if norms[m] >= max(1.0, mmax / 4)}
    if len(use) < 2:
        use = live
    x = np.log1p(np.array([norms[m] for m in use]))
    y = np.log(np.array(list(use.values())))
    slope = float(np.polyfit(x, y, 1)[0]) if len(set(x)) > 1 else 0.0
    details["types_fitted"] = len(use)
    details["threshold"] = -M + margin
    if slope > -M + margin:
        status = "fail"
    elif table.relative_tail > TAIL_LIMIT:
        status = "inconclusive"
    else:
        status = "pass"
    return SeminormReport(N, top, per, slope, constants, status, M, details, table.pair)


def verify_decay(pair, f: SampledFunction, N: int, M: int, Mmax_types: int = 16, **kw) -> SeminormReport:
    """Decay of ``||G_m f_m||_(N)`` in the type ``m`` at rate ``M``."""
    if not 0 <= N <= 3 or not 0 <= M <= 4:
        raise DomainError("need N <= 3 and M <= 4")
    table = seminorm_table(pair, f, N, Mmax_types, **kw)
    rep = fit_decay(table, N, M)
    rep.details["Mmax_types"] = Mmax_types
    return rep


@dataclass
class Selection:
    N_of: dict  # m -> N
    thresholds: list  # r_N
    status: str


def diagonal_select(table: SeminormTable) -> Selection:
    """Piecewise-constant ``N(m)`` from thresholds ``r_N``.

    ``r_N`` is the least radius beyond which ``||g_m||_(N) <= |xi'_m|^-N`` on
    the tabulated types; ``N(m) = 0`` for ``|xi'| <= r_0`` and ``N`` for
    ``r_N < |xi'| <= r_{N+1}``.

    Raises
    ------
    DomainError
        On an empty table.
    """
    if table is None or not table.values:
        raise DomainError("no seminorm reports to select from")
    Nmax = table.Nmax
    ms = list(table.values)
    if len(ms) == 1:
        return Selection({ms[0]: Nmax}, [0.0] * (Nmax + 1), "pass")
    rad = {m: table.types[m].norm for m in ms}
    thresholds = []
    for N in range(Nmax + 1):
        bad = [rad[m] for m in ms if rad[m] > 0 and table.values[m][N] > rad[m] ** (-N)]
        thresholds.append(max(bad) if bad else 0.0)
    monotone = all(a <= b for a, b in zip(thresholds, thresholds[1:]))
    N_of = {}
    for m in ms:
        n = 0
        for N in range(Nmax + 1):
            if rad[m] > thresholds[N]:
                n = N
        N_of[m] = n
    return Selection(N_of, thresholds, "pass" if monotone else "inconclusive")


# ---------------------------------------------------------------------------
# extension and generator change


def schwartz_extend(pair, table: SeminormTable, spec: BumpSpec = BumpSpec(), spacing=LATTICE_SPACING) -> GridFunction:
    """``u(xi', xi'') = sum_m g_m(xi'') eta(xi' - m)`` on a grid over ``R^2``.

    Raises
    ------
    DecayError
        If the per-type data fail the decay test at ``(N, M) = (2, 3)``.
    """
    p = get_pair(pair)
    if p.id != "u1_c":
        raise UnsupportedPairError("extension across types is implemented for u1_c")
    if table.Nmax < 2:
        raise DomainError("table must contain seminorms up to N = 2")
    rep = fit_decay(table, 2, 3)
    if not rep.passed:
        raise DecayError(f"decay precondition unmet ({rep.status}, slope {rep.slope})", report=rep)
    ms = sorted(table.g)
    lo, hi = min(ms) - 1, max(ms) + 1
    ax1 = _lattice_axis("xi1", lo, hi, spacing)
    per = int(round(1.0 / spacing))
    offs, st = _stencil(spec, spacing)
    vals = np.zeros((ax1.n, table.xi2.n), dtype=complex)
    for m in ms:
        c = (m - lo) * per
        vals[c + offs, :] += st[:, None] * table.g[m][None, :]
    return GridFunction((ax1, table.xi2), vals)


def _poly_eval(P, xi):
    """Evaluate a polynomial map given as ``[[(coeff, exponents), ...], ...]``."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    out = np.zeros((xi.shape[0], len(P)))
    for j, comp in enumerate(P):
        for coeff, exps in comp:
            exps = tuple(exps)
            if len(exps) != xi.shape[1]:
                raise DomainError(f"monomial {exps} does not match dimension {xi.shape[1]}")
            term = np.full(xi.shape[0], float(coeff))
            for i, e in enumerate(exps):
                if e:
                    term = term * xi[:, i] ** int(e)
            out[:, j] += term
    return out


def change_of_generators(pair, P, Q, sample, tol=1e-10, tail_fraction=0.5):
    """Check ``Q(P(xi)) = xi`` and fit the exponent in
    ``(1+|xi|)^(1/m) <~ 1 + |P(xi)| <~ (1+|xi|)^m``.

    The slope of ``log(1 + |P(xi)|)`` against ``log(1 + |xi|)`` on the largest
    ``tail_fraction`` of the sample gives ``s``; ``m`` is the least integer
    with ``1/m - 0.05 <= s <= m + 0.05``.
    """
    from .reports import Report, verdict

    p = get_pair(pair)
    xi = np.array([s.xi if hasattr(s, "xi") else s for s in sample], dtype=float)
    if xi.ndim == 1:
        xi = xi[:, None]
    PX = _poly_eval(P, xi)
    QPX = _poly_eval(Q, PX)
    scale = 1.0 + np.linalg.norm(xi, axis=1)
    rt = float(np.max(np.linalg.norm(QPX - xi, axis=1) / scale))
    PQ = _poly_eval(P, QPX)
    rt2 = float(np.max(np.linalg.norm(PQ - PX, axis=1) / (1.0 + np.linalg.norm(PX, axis=1))))
    a = np.log1p(np.linalg.norm(xi, axis=1))
    b = np.log1p(np.linalg.norm(PX, axis=1))
    order = np.argsort(a)
    k = max(2, int(len(a) * tail_fraction))
    sel = order[-k:]
    s = float(np.polyfit(a[sel], b[sel], 1)[0]) if np.ptp(a[sel]) > 0 else 1.0
    m = 1
    while not (1.0 / m - 0.05 <= s <= m + 0.05):
        m += 1
        if m > 64:
            break
    lo = float(np.min(np.exp(b - a / m)))
    hi = float(np.max(np.exp(b - a * m)))
    ok = rt < tol and rt2 < tol
    return Report(
        "generators", p.id, tol, max(rt, rt2), verdict(ok),
        {"exponent": m, "slope": s, "C_lower": lo, "C_upper": hi, "roundtrip_QP": rt, "roundtrip_PQ": rt2, "samples": len(xi)},
    )
