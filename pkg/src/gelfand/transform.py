"""Spherical transform, its inverse, and the Plancherel checks.

With Haar measure normalized as in :mod:`gelfand.pairs`, the transform

    Gf(phi) = int_G f(x) phi(x^{-1}) dx = int_G f(x) conj(phi(x)) dx

reduces to a Hankel transform on ``e2``/``u1_c`` and to a Fourier transform
in ``t`` followed by a Laguerre projection on ``heis1``.  Plancherel weights
per pair (relative to Lebesgue ``d lambda``):

=========  ==============================  ==================================
pair       weight                          note
=========  ==============================  ==================================
flat_r1    1 / pi                          even part only (xi = lam**2)
e2         lam / (2 pi)                    (2 pi)^-2 times polar 2 pi lam
u1_c       lam / (2 pi) on every type m    K has mass one
heis1      |lam| / (4 pi^2) on every ray   the limit ray carries no mass
=========  ==============================  ==================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridError, ResolutionError, SymmetryError, WeightError
from .jacobi import jacobi_eigvalsh
from .pairs import K_INVARIANT, _boundary_max, get_pair, group_convolve, apply_generator
from .reports import Report, verdict
from .sampling import Axis, SampledFunction, grid_shape, mesh, sample
from .specfun import bessel_j, gauss_legendre, laguerre_functions

__all__ = [
    "SpectrumFunction",
    "PLANCHEREL_CONSTANTS",
    "plancherel_points",
    "spherical_transform",
    "inverse_transform",
    "grid_weights",
    "l2_norm",
    "verify_plancherel",
    "verify_commutativity",
    "verify_multiplicativity",
    "verify_positive_definite",
    "verify_eigen",
]

# Density of the Plancherel measure relative to |lam|^a d lam, a = 0 for
# flat_r1 and 1 otherwise.  Calibrated by scripts/calibrate_plancherel.py.
PLANCHEREL_CONSTANTS = {
    "flat_r1": 1.0 / math.pi,
    "e2": 1.0 / (2.0 * math.pi),
    "u1_c": 1.0 / (2.0 * math.pi),
    "heis1": 1.0 / (4.0 * math.pi**2),
}


@dataclass
class SpectrumFunction:
    """Values on a list of spectrum points, optionally with Plancherel weights."""

    pair: str
    points: list
    values: np.ndarray
    plancherel_weights: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = list(self.points)
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if len(self.values) != len(self.points):
            raise GridError(f"{len(self.values)} values for {len(self.points)} points")
        if self.plancherel_weights is not None:
            w = np.asarray(self.plancherel_weights, dtype=float).reshape(-1)
            if len(w) != len(self.points):
                raise WeightError(f"{len(w)} weights for {len(self.points)} points")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise WeightError("Plancherel weights must be finite and nonnegative")
            self.plancherel_weights = w

    def weighted_norm(self):
        if self.plancherel_weights is None:
            raise WeightError("spectrum function carries no Plancherel weights")
        return math.sqrt(float(np.sum(np.abs(self.values) ** 2 * self.plancherel_weights)))

    def with_values(self, values):
        return SpectrumFunction(self.pair, self.points, values, self.plancherel_weights, dict(self.meta))


# ---------------------------------------------------------------------------
# Plancherel grids


def plancherel_points(pair, lam_max, n_lambda, m_max=0, kmax=0, include_ray=False):
    """Spectrum points with discretized Plancherel weights.

    ``lambda`` runs over Gauss-Legendre nodes on ``[0, lam_max]`` (``heis1``:
    ``n_lambda // 2`` nodes on each of ``[-lam_max, 0]`` and ``[0, lam_max]``).
    ``u1_c`` repeats the grid for ``m = -m_max..m_max``; ``heis1`` for
    ``k = 0..kmax``.  Ray points, if requested, get weight zero.
    """
    p = get_pair(pair)
    c = PLANCHEREL_CONSTANTS[p.id]
    if n_lambda < 1 or not lam_max > 0:
        raise DomainError("need n_lambda >= 1 and lam_max > 0")
    points, weights = [], []
    if p.id == "heis1":
        half = max(n_lambda // 2, 1)
        neg = gauss_legendre(half, -lam_max, 0.0)
        pos = gauss_legendre(half, 0.0, lam_max)
        lams = np.concatenate([neg.nodes, pos.nodes])
        wl = np.concatenate([neg.weights, pos.weights]) * np.abs(lams) * c
        for k in range(int(kmax) + 1):
            for lam, w in zip(lams, wl):
                points.append(p.point(branch="fan", k=k, **{"lambda": float(lam)}))
                weights.append(w)
        if include_ray:
            for eta in pos.nodes:
                points.append(p.point(branch="ray", eta=float(eta)))
                weights.append(0.0)
        return points, np.array(weights)
    rule = gauss_legendre(n_lambda, 0.0, lam_max)
    wl = rule.weights * c * (rule.nodes if p.id != "flat_r1" else 1.0)
    ms = range(-int(m_max), int(m_max) + 1) if p.id == "u1_c" else [None]
    for m in ms:
        for lam, w in zip(rule.nodes, wl):
            kw = {"lambda": float(lam)}
            if m is not None:
                kw["m"] = m
            points.append(p.point(**kw))
            weights.append(w)
    return points, np.array(weights)


# ---------------------------------------------------------------------------
# quadrature on sampled functions


def grid_weights(f: SampledFunction):
    """Haar quadrature weights on the grid of ``f`` (broadcast to full shape).

    ``r`` carries the polar factor ``2 pi r``; ``theta`` is normalized to
    total mass one.
    """
    w = np.ones(grid_shape(f.grid))
    for i, ax in enumerate(f.grid):
        shape = [1] * len(f.grid)
        shape[i] = ax.n
        wa = ax.weights()
        if ax.name == "r":
            wa = wa * 2 * math.pi * np.abs(ax.nodes())
        elif ax.name == "theta":
            wa = wa / (2 * math.pi)
        w = w * wa.reshape(shape)
    return w


def l2_norm(f: SampledFunction):
    return math.sqrt(float(np.sum(grid_weights(f) * np.abs(f.values) ** 2)))


def _check_transform_symmetry(p, f, points):
    if f.pair != p.id:
        raise GridError(f"function lives on {f.pair}, not {p.id}")
    if f.symmetry == "bi-K-invariant":
        return
    if p.descriptor.strong and f.symmetry == "K-central":
        return
    if p.descriptor.strong and f.symmetry == "K-type":
        bad = [s for s in points if (s.params.get("m"),) != tuple(f.ktype)]
        if bad:
            raise SymmetryError(f"K-type {f.ktype} function evaluated at points of another type, e.g. {bad[0].params}")
        return
    raise SymmetryError(f"spherical transform on {p.id} needs a bi-K-invariant function, got {f.symmetry!r}")


def _truncation_meta(f):
    scale = float(np.max(np.abs(f.values))) if f.values.size else 0.0
    meta = {"truncation": f.truncation, "nodes": {ax.name: ax.n for ax in f.grid}}
    if scale > 0:
        edge = _boundary_max(f.values, f.grid) / scale
        meta["edge_relative"] = edge
        if edge > 1e-12:
            meta["warnings"] = [f"function does not decay at the truncation radius (relative edge value {edge:.2e})"]
    return meta


def _lambda_groups(points, key="lambda"):
    groups = {}
    for i, s in enumerate(points):
        groups.setdefault(s.params[key], []).append(i)
    return groups


def _hankel_matrix(lams, r):
    """``J_0(lam r)`` for all lam (rows) and r (columns)."""
    return bessel_j(0, np.outer(np.asarray(lams, dtype=float), r))


def _transform_fast(p, f, points):
    """Structured reductions; returns None when no fast path applies."""
    names = f.names
    if names == ("r",) and p.id in ("e2", "u1_c"):
        r = f.grid[0]
        wr = grid_weights(f)
        out = np.zeros(len(points), dtype=complex)
        lams = np.array([s.params["lambda"] for s in points])
        J = _hankel_matrix(lams, r.nodes())
        out[:] = J @ (wr * f.values)
        if p.id == "u1_c":
            m0 = 0 if f.symmetry == "bi-K-invariant" else (f.ktype[0] if f.ktype else 0)
            out[np.array([s.params["m"] != m0 for s in points], dtype=bool)] = 0
        return out
    if names == ("theta", "r") and p.id == "u1_c":
        th, r = f.grid
        wt = th.weights() / (2 * math.pi)
        wr = r.weights() * 2 * math.pi * r.nodes()
        out = np.zeros(len(points), dtype=complex)
        by_m = {}
        for i, s in enumerate(points):
            by_m.setdefault(s.params["m"], []).append(i)
        for m, idx in by_m.items():
            prof = (wt * np.exp(-1j * m * th.nodes())) @ f.values
            lams = np.array([points[i].params["lambda"] for i in idx])
            out[idx] = _hankel_matrix(lams, r.nodes()) @ (wr * prof)
        return out
    if names == ("r", "t") and p.id == "heis1":
        r, t = f.grid
        wr = r.weights() * 2 * math.pi * r.nodes()
        wt = t.weights()
        out = np.zeros(len(points), dtype=complex)
        fan = [i for i, s in enumerate(points) if s.params["branch"] == "fan"]
        ray = [i for i, s in enumerate(points) if s.params["branch"] == "ray"]
        groups = _lambda_groups([points[i] for i in fan])
        for lam, local in groups.items():
            idx = [fan[j] for j in local]
            ks = [points[i].params["k"] for i in idx]
            fl = f.values @ (wt * np.exp(-1j * lam * t.nodes()))
            L = laguerre_functions(max(ks), 0.5 * abs(lam) * r.nodes() ** 2)
            proj = L @ (wr * fl)
            out[idx] = proj[ks]
        if ray:
            f0 = f.values @ wt
            etas = np.array([points[i].params["eta"] for i in ray])
            out[ray] = _hankel_matrix(etas, r.nodes()) @ (wr * f0)
        return out
    return None


def spherical_transform(pair, f: SampledFunction, points) -> SpectrumFunction:
    """Quadrature evaluation of ``Gf`` at each spectrum point.

    Raises
    ------
    SymmetryError
        If ``f`` lacks the invariance the pair requires.
    """
    p = get_pair(pair)
    points = list(points)
    _check_transform_symmetry(p, f, points)
    meta = _truncation_meta(f)
    if not points:
        return SpectrumFunction(p.id, [], np.zeros(0), meta=meta)
    out = _transform_fast(p, f, points)
    if out is None:
        coords = f.mesh()
        w = grid_weights(f) * f.values
        out = np.array([np.sum(w * np.conj(p.phi(s, **coords))) for s in points])
    return SpectrumFunction(p.id, points, out, meta=meta)


# ---------------------------------------------------------------------------
# inverse


def _fan_tail_estimate(points, values, weights):
    """Power-law extrapolation of per-ray energy beyond the largest ``k``."""
    energy = {}
    for s, v, w in zip(points, values, weights):
        if s.params.get("branch") == "fan":
            energy[s.params["k"]] = energy.get(s.params["k"], 0.0) + abs(v) ** 2 * w
    if not energy:
        return 0.0, None
    kmax = max(energy)
    ks = np.array(sorted(k for k in energy if k >= max(1, (3 * kmax) // 4)))
    e = np.array([energy[k] for k in ks])
    if len(ks) < 2 or np.any(e <= 0):
        return 0.0, kmax
    slope, icpt = np.polyfit(np.log(ks), np.log(e), 1)
    p = -slope
    if p <= 1:
        return float("inf"), kmax
    # sum_{k > K} C k^-p ~ C K^(1-p) / (p - 1)
    return float(math.exp(icpt) * kmax ** (1 - p) / (p - 1)), kmax


def _inverse_fast(p, gh, grid):
    names = tuple(ax.name for ax in grid)
    w = gh.plancherel_weights
    coef = gh.values * w
    if names == ("r",) and p.id in ("e2", "u1_c"):
        if p.id == "u1_c" and any(s.params["m"] != 0 for s in gh.points):
            return None
        lams = np.array([s.params["lambda"] for s in gh.points])
        return coef @ _hankel_matrix(lams, grid[0].nodes())
    if names == ("theta", "r") and p.id == "u1_c":
        th, r = grid
        out = np.zeros((th.n, r.n), dtype=complex)
        by_m = {}
        for i, s in enumerate(gh.points):
            by_m.setdefault(s.params["m"], []).append(i)
        for m, idx in by_m.items():
            lams = np.array([gh.points[i].params["lambda"] for i in idx])
            prof = coef[idx] @ _hankel_matrix(lams, r.nodes())
            out += np.exp(1j * m * th.nodes())[:, None] * prof[None, :]
        return out
    if names == ("r", "t") and p.id == "heis1":
        r, t = grid
        out = np.zeros((r.n, t.n), dtype=complex)
        fan = [i for i, s in enumerate(gh.points) if s.params["branch"] == "fan"]
        ray = [i for i, s in enumerate(gh.points) if s.params["branch"] == "ray"]
        groups = _lambda_groups([gh.points[i] for i in fan])
        for lam, local in groups.items():
            idx = [fan[j] for j in local]
            ks = [gh.points[i].params["k"] for i in idx]
            L = laguerre_functions(max(ks), 0.5 * abs(lam) * r.nodes() ** 2)
            prof = coef[idx] @ L[ks]
            out += prof[:, None] * np.exp(1j * lam * t.nodes())[None, :]
        if ray:
            etas = np.array([gh.points[i].params["eta"] for i in ray])
            out += (coef[ray] @ _hankel_matrix(etas, r.nodes()))[:, None]
        return out
    return None


def inverse_transform(pair, gh: SpectrumFunction, grid) -> SampledFunction:
    """``f(x) = sum_sigma gh(sigma) phi_sigma(x) beta(sigma)`` on ``grid``.

    For ``heis1`` the result metadata carries ``kmax`` and the estimated
    Plancherel mass of the truncated rays ``k > kmax``.

    Raises
    ------
    WeightError
        If ``gh`` has no Plancherel weights.
    """
    p = get_pair(pair)
    grid = tuple(grid)
    if gh.plancherel_weights is None:
        raise WeightError("inverse transform needs Plancherel weights")
    if gh.pair != p.id:
        raise GridError(f"spectrum function lives on {gh.pair}, not {p.id}")
    vals = _inverse_fast(p, gh, grid) if gh.points else np.zeros(grid_shape(grid), dtype=complex)
    if vals is None:
        coords = mesh(grid)
        vals = np.zeros(grid_shape(grid), dtype=complex)
        for s, c in zip(gh.points, gh.values * gh.plancherel_weights):
            if c == 0:
                continue
            phi = p.phi(s, **coords)
            if p.id == "flat_r1":
                # xi = lam**2 cannot tell lam from -lam: exact for even f only
                phi = np.cos(s.params["lambda"] * coords["x"])
            vals = vals + c * phi
    meta = {"points": len(gh.points)}
    if p.id == "heis1":
        tail, kmax = _fan_tail_estimate(gh.points, gh.values, gh.plancherel_weights)
        meta.update({"kmax": kmax, "fan_tail_estimate": tail})
    sym, ktype = "bi-K-invariant", None
    if p.id == "u1_c":
        ms = {s.params["m"] for s in gh.points}
        if ms - {0}:
            sym = "K-central" if len(ms) > 1 else "K-type"
            ktype = (ms.pop(),) if sym == "K-type" else None
    return SampledFunction(p.id, grid, np.broadcast_to(vals, grid_shape(grid)).copy(), symmetry=sym, ktype=ktype, meta=meta)


# ---------------------------------------------------------------------------
# verification


def verify_plancherel(pair, f: SampledFunction, tol, points=None, weights=None, weight_scale=1.0, **grid_kw) -> Report:
    """Compare ``||f||_2`` with the Plancherel-weighted norm of ``Gf``.

    ``observed`` is ``|ratio - 1|`` with ``ratio = ||f||_2 / ||Gf||_beta``.
    Default spectrum points come from :func:`plancherel_points` with
    ``grid_kw`` (``lam_max``, ``n_lambda``, ``m_max``, ``kmax``).
    """
    p = get_pair(pair)
    if points is None:
        kw = {"lam_max": 12.0, "n_lambda": 200}
        kw.update(grid_kw)
        points, weights = plancherel_points(p, **kw)
    gh = spherical_transform(p, f, points)
    gh.plancherel_weights = np.asarray(weights, dtype=float) * weight_scale
    lhs = l2_norm(f)
    rhs = gh.weighted_norm()
    details = {"l2_norm": lhs, "weighted_norm": rhs, "points": len(points), "weight_scale": weight_scale}
    details.update(gh.meta)
    if lhs == 0 and rhs == 0:
        return Report("plancherel", p.id, tol, 0.0, "pass", {**details, "ratio": 1.0})
    ratio = lhs / rhs if rhs > 0 else float("inf")
    details["ratio"] = ratio
    if p.id == "heis1":
        tail, kmax = _fan_tail_estimate(gh.points, gh.values, gh.plancherel_weights)
        details.update({"kmax": kmax, "fan_tail_estimate": tail})
    obs = abs(ratio - 1.0)
    return Report("plancherel", p.id, tol, obs, verdict(obs < tol), details)


def _is_commuting_class(p, f, g):
    if f.symmetry == g.symmetry == "bi-K-invariant":
        return True
    if p.descriptor.strong and f.symmetry in K_INVARIANT[1:] and g.symmetry in K_INVARIANT[1:]:
        return True
    return False


def verify_commutativity(pair, f: SampledFunction, g: SampledFunction, tol, require_symmetry=True) -> Report:
    """``||f*g - g*f||_inf / ||f*g||_inf < tol`` by the direct convolution oracle.

    With ``require_symmetry=False`` the symmetry precondition is not
    enforced, which is how non-invariant counterexamples are run.
    """
    p = get_pair(pair)
    if require_symmetry and not _is_commuting_class(p, f, g):
        raise SymmetryError(f"commutativity is only asserted for bi-K-invariant (or K-central) functions, got {f.symmetry}/{g.symmetry}")
    fg = group_convolve(p, f, g)
    gf = group_convolve(p, g, f)
    scale = float(np.max(np.abs(fg.values)))
    diff = float(np.max(np.abs(fg.values - gf.values)))
    obs = diff / scale if scale > 0 else (0.0 if diff == 0 else float("inf"))
    details = {"sup_fg": scale, "sup_diff": diff, "warnings": fg.meta.get("warnings", []) + gf.meta.get("warnings", [])}
    return Report("commutativity", p.id, tol, obs, verdict(obs < tol), details)


def verify_multiplicativity(pair, f: SampledFunction, g: SampledFunction, points, tol) -> Report:
    """``G(f*g) = Gf . Gg`` at the given points, relative to ``max |Gf Gg|``."""
    p = get_pair(pair)
    fg = group_convolve(p, f, g)
    lhs = spherical_transform(p, fg, points).values
    rhs = spherical_transform(p, f, points).values * spherical_transform(p, g, points).values
    scale = float(np.max(np.abs(rhs))) if len(rhs) else 0.0
    diff = float(np.max(np.abs(lhs - rhs))) if len(rhs) else 0.0
    obs = diff / scale if scale > 0 else diff
    return Report("multiplicativity", p.id, tol, obs, verdict(obs < tol), {"points": len(points), "sup_product": scale, "sup_diff": diff})


def gram_matrix(pair, sigma, points):
    p = get_pair(pair)
    n = len(points)
    prods = [[p.multiply(p.inverse(points[i]), points[j]) for j in range(n)] for i in range(n)]
    flat = [x for row in prods for x in row]
    coords = p.coord_arrays(flat)
    return np.asarray(p.phi(sigma, **coords), dtype=complex).reshape(n, n)


def verify_positive_definite(pair, sigma, points, tol) -> Report:
    """Smallest eigenvalue of ``[phi(x_i^{-1} x_j)]`` (Jacobi) is ``>= -tol``."""
    p = get_pair(pair)
    points = list(points)
    if not 1 <= len(points) <= 200:
        raise DomainError(f"need 1..200 points, got {len(points)}")
    p.validate(dict(sigma.params))
    M = gram_matrix(p, sigma, points)
    ev = jacobi_eigvalsh(M)
    lo = float(ev[0])
    return Report(
        "posdef", p.id, tol, lo, verdict(lo >= -tol),
        {"points": len(points), "sigma": sigma.params, "max_eigenvalue": float(ev[-1]), "hermitian_defect": float(np.max(np.abs(M - M.conj().T)))},
    )


DEFAULT_EIGEN_CENTERS = {
    "flat_r1": [(0.0,), (0.37,), (-1.2,)],
    "e2": [(0.0, 0.0), (0.3, -0.2), (0.9, 0.5)],
    "u1_c": [(0.0, 0.0, 0.0), (0.7, 0.3, -0.2), (2.5, 0.9, 0.5)],
    "heis1": [(0.0, 0.0, 0.0), (0.3, -0.2, 0.4), (0.9, 0.5, -0.7)],
}


def _patch(p, center, step):
    names = (("theta",) if p.descriptor.r else ()) + p.h_coords
    return tuple(Axis(n, c - 2 * step, c + 2 * step, 5) for n, c in zip(names, center))


def verify_eigen(pair, sigma, step, tol, centers=None) -> Report:
    """Finite-difference residual of ``(D_j - xi_j) phi`` on small patches.

    ``observed`` is the largest, over generators ``j``, of
    ``max |(D_j - xi_j) phi| / max |phi|`` over interior patch nodes.

    Raises
    ------
    ResolutionError
        If ``step`` is coarser than the finite-difference limit.
    """
    p = get_pair(pair)
    if step > 1e-2:
        raise ResolutionError(f"step {step} exceeds 1e-2")
    p.validate(dict(sigma.params))
    centers = centers or DEFAULT_EIGEN_CENTERS[p.id]
    per_j = []
    for j in range(1, p.descriptor.ell + 1):
        res = 0.0
        sup = 0.0
        for c in centers:
            f = sample(p.id, _patch(p, c, step), lambda **kw: p.phi(sigma, **kw), symmetry="none")
            d = apply_generator(p, j, f, step).values - sigma.xi[j - 1] * f.values
            res = max(res, float(np.nanmax(np.abs(d))))
            sup = max(sup, float(np.max(np.abs(f.values[(slice(1, -1),) * f.values.ndim]))))
        per_j.append(res / sup)
    obs = max(per_j)
    return Report("eigen", p.id, tol, obs, verdict(obs < tol), {"per_generator": per_j, "xi": sigma.xi, "step": step, "sigma": sigma.params})
