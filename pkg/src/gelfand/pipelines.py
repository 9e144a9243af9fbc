"""Built-in test families and the named verification suites.

Each suite takes a :class:`RunConfig` and returns an object with ``status``
and ``to_dict()``; the CLI maps the status to its exit code.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedPairError
from .ktype import project_ktype, verify_type_orthogonality
from .pairs import GroupPoint, get_pair
from .reports import Report, verdict
from .sampling import Axis, periodic_theta, sample
from .schwartz import change_of_generators, verify_decay
from .transform import (
    inverse_transform,
    l2_norm,
    plancherel_points,
    spherical_transform,
    verify_commutativity,
    verify_eigen,
    verify_multiplicativity,
    verify_plancherel,
    verify_positive_definite,
)

CHECKS = ("plancherel", "multiplicativity", "commutativity", "posdef", "eigen", "ktype-orthogonality", "decay", "generators")

DEFAULT_TOL = {
    "plancherel": 1e-4,
    "multiplicativity": 1e-3,
    "commutativity": 1e-3,
    "posdef": 1e-8,
    "eigen": 1e-3,
    "ktype-orthogonality": 1e-10,
    "decay": None,
    "generators": 1e-10,
}


@dataclass
class RunConfig:
    pair: str = "e2"
    tol: float | None = None
    seed: int = 12345
    points: int = 50
    sigmas: int = 20
    step: float = 1e-3
    N: int = 2
    M: int = 3
    Mmax_types: int = 16
    kmax: int = 40
    lam_max: float | None = None
    n_lambda: int | None = None
    family: str = "gaussian"
    types: tuple = (1, 2)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise DomainError("tolerances must be positive")
        if self.n_lambda is not None and self.n_lambda < 8:
            raise DomainError("node counts must be >= 8")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def to_dict(self):
        d = asdict(self)
        d["types"] = list(self.types)
        return d


# ---------------------------------------------------------------------------
# families


def radial_axis(r_max=20.0, n=400):
    return Axis("r", 0.0, r_max, n, "gauss")


def plane_axes(half=8.0, n=65):
    return Axis("x", -half, half, n), Axis("y", -half, half, n)


def heis_axes(r_max=12.0, t_max=14.0, n_r=300, n_t=300):
    return Axis("r", 0.0, r_max, n_r, "gauss"), Axis("t", -t_max, t_max, n_t, "gauss")


def gaussian_family(pair, kind="radial"):
    """Schwartz test function of each pair in a transform-friendly chart."""
    p = get_pair(pair)
    if p.id == "flat_r1":
        return sample(p.id, (Axis("x", -20.0, 20.0, 400, "gauss"),), lambda x: np.exp(-x * x / 2))
    if p.id == "e2":
        if kind == "cartesian":
            return sample(p.id, plane_axes(), lambda x, y: np.exp(-(x * x + y * y) / 2))
        return sample(p.id, (radial_axis(),), lambda r: np.exp(-r * r / 2))
    if p.id == "u1_c":
        return sample(
            p.id,
            (periodic_theta(24), radial_axis()),
            lambda theta, r: np.exp(-r * r / 2) * (1 + 0.5 * np.cos(theta)) + 0.3j * np.sin(2 * theta) * r * r * np.exp(-r * r),
            symmetry="K-central",
        )
    return sample(p.id, heis_axes(), lambda r, t: np.exp(-(r * r + t * t) / 2))


def heis_smooth_family():
    """``t``-profile whose Fourier transform vanishes to fourth order at 0."""
    return sample("heis1", heis_axes(), lambda r, t: (t**4 - 6 * t * t + 3) * np.exp(-(r * r + t * t) / 2))


def wrapped_gaussian(theta, s):
    return sum(np.exp(-((theta - math.pi + 2 * math.pi * k) ** 2) / (2 * s * s)) for k in range(-3, 4))


def decay_family(kind="gaussian", s=0.6, Mmax_types=16, n_r=160):
    """K-central functions on u1_c: smooth (wrapped Gaussian) or ``|theta|`` in theta."""
    th = periodic_theta(4 * Mmax_types + 8)
    r = Axis("r", 0.0, 12.0, n_r, "gauss")
    if kind == "gaussian":
        prof = lambda theta: wrapped_gaussian(theta, s)
    elif kind == "abs":
        prof = lambda theta: np.abs(np.where(theta > math.pi, theta - 2 * math.pi, theta))
    else:
        raise DomainError(f"unknown decay family {kind!r}")
    return sample("u1_c", (th, r), lambda theta, r: prof(theta) * np.exp(-r * r / 2), symmetry="K-central")


def random_radial(pair, rng, kind="cartesian"):
    """Random positive combination of centered Gaussians (bi-K-invariant)."""
    p = get_pair(pair)
    a = rng.uniform(0.5, 1.5, 3)
    c = rng.uniform(0.2, 1.0, 3)
    prof = lambda rho2: sum(ci * np.exp(-ai * rho2) for ai, ci in zip(a, c))
    if p.id == "flat_r1":
        return sample(p.id, (Axis("x", -10.0, 10.0, 129),), lambda x: prof(x * x))
    if p.id == "e2":
        return sample(p.id, plane_axes(), lambda x, y: prof(x * x + y * y))
    if p.id == "u1_c":
        m = int(rng.integers(-2, 3))
        return sample(p.id, (periodic_theta(12),) + plane_axes(7.0, 57), lambda theta, x, y: np.exp(1j * m * theta) * prof(x * x + y * y), symmetry="K-type", ktype=m)
    b = rng.uniform(0.5, 1.0)
    return sample(p.id, conv_axes_heis(), lambda x, y, t: prof(x * x + y * y) * np.exp(-b * t * t))


def conv_axes_heis():
    return Axis("x", -7.0, 7.0, 57), Axis("y", -7.0, 7.0, 57), Axis("t", -16.0, 16.0, 64, "periodic")


def conv_pair_family(pair):
    """Two Gaussian operands and a few spectrum points for multiplicativity."""
    p = get_pair(pair)
    if p.id == "flat_r1":
        ax = (Axis("x", -12.0, 12.0, 257),)
        f = sample(p.id, ax, lambda x: np.exp(-x * x / 2))
        g = sample(p.id, ax, lambda x: np.exp(-x * x))
        pts = p.spectrum_grid({"lambda": [0.0, 0.5, 1.0, 2.0]})
    elif p.id == "e2":
        ax = plane_axes()
        f = sample(p.id, ax, lambda x, y: np.exp(-(x * x + y * y) / 2))
        g = sample(p.id, ax, lambda x, y: (1 + x * x + y * y) * np.exp(-(x * x + y * y)))
        pts = p.spectrum_grid({"lambda": [0.0, 0.5, 1.0, 2.0]})
    elif p.id == "u1_c":
        ax = (periodic_theta(12),) + plane_axes(7.0, 57)
        f = sample(p.id, ax, lambda theta, x, y: np.exp(-(x * x + y * y) / 2) * (1 + 0.5 * np.cos(theta)), symmetry="K-central")
        g = sample(p.id, ax, lambda theta, x, y: np.exp(-(x * x + y * y)) * (1 + 0.25j * np.sin(theta)), symmetry="K-central")
        pts = p.spectrum_grid({"m": [-1, 0, 1], "lambda": [0.0, 0.7, 1.5]})
    else:
        ax = conv_axes_heis()
        f = sample(p.id, ax, lambda x, y, t: np.exp(-(x * x + y * y) / 2 - t * t / 2))
        g = sample(p.id, ax, lambda x, y, t: np.exp(-(x * x + y * y) - t * t))
        pts = p.spectrum_grid({"kmax": 2, "lambda": [-1.0, 0.5, 1.0], "eta": [0.5]})
    return f, g, pts


def random_group_points(pair, rng, n, scale=3.0):
    p = get_pair(pair)
    pts = []
    for _ in range(n):
        z = tuple(float(v) for v in rng.uniform(-scale, scale, len(p.h_coords)))
        theta = tuple(float(v) for v in rng.uniform(0, 2 * math.pi, p.descriptor.r))
        pts.append(GroupPoint(theta, z))
    return pts


def random_sigmas(pair, rng, n, lam_max=4.0, m_max=8, kmax=10, ray_fraction=0.1):
    p = get_pair(pair)
    out = []
    for _ in range(n):
        lam = float(rng.uniform(0, lam_max))
        if p.id == "u1_c":
            out.append(p.point(m=int(rng.integers(-m_max, m_max + 1)), **{"lambda": lam}))
        elif p.id == "heis1":
            if rng.uniform() < ray_fraction:
                out.append(p.point(branch="ray", eta=lam))
            else:
                out.append(p.point(branch="fan", k=int(rng.integers(0, kmax + 1)), **{"lambda": float(rng.uniform(-lam_max, lam_max))}))
        else:
            out.append(p.point(**{"lambda": lam}))
    return out


# ---------------------------------------------------------------------------
# suites


def roundtrip_error(pair, f, points, weights):
    gh = spherical_transform(pair, f, points)
    gh.plancherel_weights = weights
    g = inverse_transform(pair, gh, f.grid)
    err = l2_norm(g.with_values(g.values - f.values))
    norm = l2_norm(f)
    return (err / norm if norm > 0 else err), g


def plancherel_grid(pair, cfg: RunConfig):
    p = get_pair(pair)
    if p.id == "heis1":
        kw = {"lam_max": 8.0, "n_lambda": 400, "kmax": cfg.kmax}
    elif p.id == "u1_c":
        kw = {"lam_max": 12.0, "n_lambda": 200, "m_max": 3}
    else:
        kw = {"lam_max": 12.0, "n_lambda": 200}
    if cfg.lam_max is not None:
        kw["lam_max"] = cfg.lam_max
    if cfg.n_lambda is not None:
        kw["n_lambda"] = cfg.n_lambda
    return kw


def suite_plancherel(cfg: RunConfig):
    p = get_pair(cfg.pair)
    tol = cfg.tol or (1e-3 if p.id == "heis1" else 1e-4)
    f = heis_smooth_family() if (p.id == "heis1" and cfg.family == "smooth") else gaussian_family(p)
    kw = plancherel_grid(p, cfg)
    points, weights = plancherel_points(p, **kw)
    rep = verify_plancherel(p, f, tol, points=points, weights=weights)
    rt, g = roundtrip_error(p, f, points, weights)
    rep.details.update({"roundtrip_relative_l2": rt, "grid": kw, "family": cfg.family})
    if "fan_tail_estimate" in g.meta:
        rep.details["fan_tail_estimate"] = g.meta["fan_tail_estimate"]
    obs = max(rep.observed, rt)
    return Report("plancherel", p.id, tol, obs, verdict(obs < tol), rep.details)


def suite_multiplicativity(cfg: RunConfig):
    f, g, pts = conv_pair_family(cfg.pair)
    return verify_multiplicativity(cfg.pair, f, g, pts, cfg.tol or DEFAULT_TOL["multiplicativity"])


def suite_commutativity(cfg: RunConfig):
    rng = np.random.default_rng(cfg.seed)
    f = random_radial(cfg.pair, rng)
    g = random_radial(cfg.pair, rng)
    if f.symmetry == "K-type" and f.ktype != g.ktype:
        g = g.with_values(g.values * np.exp(1j * (f.ktype[0] - g.ktype[0]) * g.mesh()["theta"]), ktype=f.ktype)
    rep = verify_commutativity(cfg.pair, f, g, cfg.tol or DEFAULT_TOL["commutativity"])
    rep.details["seed"] = cfg.seed
    return rep


def suite_posdef(cfg: RunConfig):
    p = get_pair(cfg.pair)
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol or DEFAULT_TOL["posdef"]
    worst, rows = float("inf"), []
    for sigma in random_sigmas(p, rng, cfg.sigmas):
        rep = verify_positive_definite(p, sigma, random_group_points(p, rng, cfg.points), tol)
        worst = min(worst, rep.observed)
        rows.append({"sigma": sigma.params, "min_eigenvalue": rep.observed})
    return Report("posdef", p.id, tol, worst, verdict(worst >= -tol), {"seed": cfg.seed, "points": cfg.points, "per_sigma": rows})


def suite_eigen(cfg: RunConfig):
    p = get_pair(cfg.pair)
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol or DEFAULT_TOL["eigen"]
    worst, rows = 0.0, []
    for sigma in random_sigmas(p, rng, cfg.sigmas):
        rep = verify_eigen(p, sigma, cfg.step, tol)
        worst = max(worst, rep.observed)
        rows.append({"sigma": sigma.params, "residual": rep.observed})
    return Report("eigen", p.id, tol, worst, verdict(worst < tol), {"seed": cfg.seed, "step": cfg.step, "per_sigma": rows})


def suite_ktype_orthogonality(cfg: RunConfig):
    p = get_pair(cfg.pair)
    if not p.descriptor.strong:
        raise UnsupportedPairError(f"{p.id} is not a strong pair")
    m1, m2 = (int(v) for v in cfg.types)
    ax = (periodic_theta(12),) + plane_axes(7.0, 57)
    f = sample(p.id, ax, lambda theta, x, y: (1 + np.cos(theta) + np.sin(2 * theta) + 0.5 * np.cos(5 * theta)) * np.exp(-(x * x + y * y) / 2), symmetry="K-central")
    g = sample(p.id, ax, lambda theta, x, y: (1 + np.sin(theta) + np.cos(2 * theta) + np.sin(5 * theta)) * np.exp(-(x * x + y * y)), symmetry="K-central")
    return verify_type_orthogonality(p, project_ktype(p, f, m1), project_ktype(p, g, m2), cfg.tol or DEFAULT_TOL["ktype-orthogonality"])


def suite_decay(cfg: RunConfig):
    p = get_pair(cfg.pair)
    if not p.descriptor.strong:
        raise UnsupportedPairError(f"decay across K-types needs a strong pair, not {p.id}")
    f = decay_family(cfg.family, Mmax_types=cfg.Mmax_types)
    return verify_decay(p, f, cfg.N, cfg.M, cfg.Mmax_types)


def generator_system(pair):
    """(P, Q, sample) for the augmented generator systems."""
    p = get_pair(pair)
    if p.id in ("e2", "flat_r1"):
        P = [[(1, (1,))], [(1, (2,))]]
        Q = [[(1, (1, 0))]]
        sample_pts = [(float(x),) for x in np.linspace(0.0, 1e4, 2001)]
    elif p.id == "heis1":
        P = [[(1, (1, 0))], [(1, (0, 1))], [(1, (2, 0)), (1, (0, 2))]]
        Q = [[(1, (1, 0, 0))], [(1, (0, 1, 0))]]
        sample_pts = p.spectrum_grid({"kmax": 40, "lambda": np.linspace(-100.0, 100.0, 41)})
    else:
        P = [[(1, (1, 0))], [(1, (0, 1))], [(1, (0, 2))]]
        Q = [[(1, (1, 0, 0))], [(1, (0, 1, 0))]]
        sample_pts = p.spectrum_grid({"m": range(-20, 21), "lambda": np.linspace(0.0, 100.0, 41)})
    return P, Q, sample_pts


def suite_generators(cfg: RunConfig):
    P, Q, pts = generator_system(cfg.pair)
    return change_of_generators(cfg.pair, P, Q, pts, tol=cfg.tol or DEFAULT_TOL["generators"])


SUITES = {
    "plancherel": suite_plancherel,
    "multiplicativity": suite_multiplicativity,
    "commutativity": suite_commutativity,
    "posdef": suite_posdef,
    "eigen": suite_eigen,
    "ktype-orthogonality": suite_ktype_orthogonality,
    "decay": suite_decay,
    "generators": suite_generators,
}


def run_check(check, cfg: RunConfig):
    if check not in SUITES:
        raise DomainError(f"unknown check {check!r}; choose from {list(CHECKS)}")
    return SUITES[check](cfg)
