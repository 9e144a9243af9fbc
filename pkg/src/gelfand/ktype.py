"""K-types for torus K (scalar case, every irreducible has dimension one).

Type ``m`` is the Fourier mode ``exp(i m theta)`` in the K-coordinate:

    f_m(theta, z) = int_K f((theta, z) k_phi^{-1}) exp(i m phi) dk
                  = exp(i m theta) * mean_j f(theta_j, z) exp(-i m theta_j).

On a periodic theta grid with ``n`` nodes this is exact for trigonometric
polynomials of degree below ``n / 2``; :func:`gelfand.sampling.theta_nodes_for`
gives the node count used when decomposing up to type ``M``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridError, ResolutionError, SymmetryError, UnsupportedPairError
from .pairs import K_INVARIANT, get_pair, group_convolve
from .reports import Report, verdict
from .sampling import SampledFunction
from .transform import grid_weights, l2_norm

__all__ = [
    "KTypeIndex",
    "Decomposition",
    "xi_prime_map",
    "project_ktype",
    "decompose",
    "verify_type_orthogonality",
    "scalar_A_S_roundtrip",
    "xi_prime_inequality",
]


@dataclass(frozen=True)
class KTypeIndex:
    m: tuple
    xi_prime: tuple

    @property
    def norm(self):
        return math.sqrt(sum(x * x for x in self.xi_prime))

    @property
    def mu_norm2(self):
        """``|mu|^2 = sum m_j^2`` (highest weight norm; rho = 0 on a torus)."""
        return sum(int(v) ** 2 for v in self.m)


def _require_strong(p):
    if not p.descriptor.strong:
        raise UnsupportedPairError(f"{p.id} is not a strong pair; K-types need a torus K acting with r >= 1")


def _as_m(p, m):
    m = tuple(int(v) for v in np.atleast_1d(m))
    if len(m) != p.descriptor.r:
        raise DomainError(f"type index must have {p.descriptor.r} entries, got {m}")
    return m


def xi_prime_map(pair, m) -> KTypeIndex:
    """Eigenvalues of ``-i d/dtheta_j`` on type ``m``: ``xi' = m``."""
    p = get_pair(pair)
    _require_strong(p)
    m = _as_m(p, m)
    return KTypeIndex(m, tuple(float(v) for v in m))


def xi_prime_inequality(pair, mmax=100, d=2) -> Report:
    """Constants in ``C (1+|m|^2) <= 1 + |xi'| + |m|^2 <= C' (1+|m|^2)^d``."""
    p = get_pair(pair)
    _require_strong(p)
    ms = np.arange(-mmax, mmax + 1)
    xi = np.array([xi_prime_map(p, int(m)).norm for m in ms])
    mid = 1 + xi + ms**2
    base = 1.0 + ms**2
    c_lo = float(np.min(mid / base))
    c_hi = float(np.max(mid / base**d))
    ok = c_lo > 0 and np.isfinite(c_hi)
    return Report("xi-prime-inequality", p.id, None, c_hi, verdict(ok), {"C": c_lo, "C_prime": c_hi, "d": d, "mmax": mmax})


def _theta_axis(f):
    th = f.axis("theta")
    if th.kind != "periodic" or not math.isclose(th.max - th.min, 2 * math.pi):
        raise GridError("K-type projection needs a periodic theta axis covering [0, 2pi)")
    return th, f.names.index("theta")


def _check_input(p, f):
    _require_strong(p)
    if f.pair != p.id:
        raise GridError(f"function lives on {f.pair}, not {p.id}")
    if f.symmetry not in K_INVARIANT:
        raise SymmetryError(f"K-type projection needs a K-central function, got {f.symmetry!r}")


def _coefficient(f, m, th, ax):
    """Theta-Fourier coefficient ``mean_j f(theta_j, .) exp(-i m theta_j)``."""
    shape = [1] * f.values.ndim
    shape[ax] = th.n
    ph = np.exp(-1j * m * th.nodes()).reshape(shape)
    return np.mean(f.values * ph, axis=ax, keepdims=True)


def project_ktype(pair, f: SampledFunction, m) -> SampledFunction:
    """Type-``m`` component of a K-central function.

    Raises
    ------
    UnsupportedPairError
        On pairs that are not strong.
    SymmetryError
        If ``f`` is not tagged K-central (or a refinement of it).
    """
    p = get_pair(pair)
    _check_input(p, f)
    (mm,) = _as_m(p, m)
    th, ax = _theta_axis(f)
    if th.n < 2 * abs(mm) + 1:
        raise ResolutionError(f"{th.n} theta nodes cannot resolve type {mm}")
    c = _coefficient(f, mm, th, ax)
    shape = [1] * f.values.ndim
    shape[ax] = th.n
    vals = np.exp(1j * mm * th.nodes()).reshape(shape) * c
    return f.with_values(np.broadcast_to(vals, f.values.shape).copy(), symmetry="K-type", ktype=(mm,))


@dataclass
class Decomposition:
    components: list  # (KTypeIndex, SampledFunction)
    tail_norm: float
    norm: float

    def norms(self):
        return [(k, l2_norm(fm)) for k, fm in self.components]


def decompose(pair, f: SampledFunction, M: int) -> Decomposition:
    """Components ``f_m`` for ``|m| <= M`` and ``||f - sum f_m||_2``.

    Bi-K-invariant input (no theta axis) is type 0 and returned as-is.
    """
    p = get_pair(pair)
    if M < 0:
        raise DomainError("M must be >= 0")
    if "theta" not in f.names:
        _require_strong(p)
        if f.symmetry != "bi-K-invariant":
            raise SymmetryError("a function without a theta axis must be bi-K-invariant")
        return Decomposition([(xi_prime_map(p, 0), f)], 0.0, l2_norm(f))
    comps = [(xi_prime_map(p, m), project_ktype(p, f, m)) for m in range(-M, M + 1)]
    rest = f.values - sum(fm.values for _, fm in comps)
    w = grid_weights(f)
    tail = math.sqrt(float(np.sum(w * np.abs(rest) ** 2)))
    return Decomposition(comps, tail, l2_norm(f))


def verify_type_orthogonality(pair, f_m: SampledFunction, g_n: SampledFunction, tol) -> Report:
    """``||f_m * g_n||_inf < tol ||f_m||_inf ||g_n||_inf`` for distinct types."""
    p = get_pair(pair)
    for h in (f_m, g_n):
        if h.symmetry != "K-type":
            raise SymmetryError("type orthogonality needs functions tagged K-type")
    if f_m.ktype == g_n.ktype:
        return Report("ktype-orthogonality", p.id, tol, None, "not applicable", {"types": [f_m.ktype, g_n.ktype]})
    conv = group_convolve(p, f_m, g_n)
    sup = float(np.max(np.abs(conv.values)))
    scale = float(np.max(np.abs(f_m.values)) * np.max(np.abs(g_n.values)))
    obs = sup / scale if scale > 0 else sup
    return Report("ktype-orthogonality", p.id, tol, obs, verdict(obs < tol), {"types": [f_m.ktype, g_n.ktype], "sup_conv": sup})


def _A(f, m, th, ax):
    """``A_m f(x) = int_K f(x k) exp(-i m phi) dk`` (right translation = theta shift)."""
    n = th.n
    acc = np.zeros_like(f.values)
    phis = th.nodes() - th.min
    for j in range(n):
        acc += np.roll(f.values, -j, axis=ax) * np.exp(-1j * m * phis[j])
    return acc / n


def scalar_A_S_roundtrip(pair, f_m: SampledFunction, m=None) -> Report:
    """Check ``S_m A_m f = f`` and the two-sided character equivariance.

    With ``tau(k_phi) = exp(-i m phi)`` (the character whose conjugate
    projects onto type ``m``), ``A_m f(k_a x k_b) = exp(i m (a + b)) A_m f(x)``.
    ``m`` defaults to the function's own type; passing another ``m`` tests
    that ``A_m`` annihilates it.
    """
    p = get_pair(pair)
    _check_input(p, f_m)
    th, ax = _theta_axis(f_m)
    if m is None:
        if f_m.ktype is None:
            raise SymmetryError("pass m explicitly for functions without a K-type tag")
        m = f_m.ktype
    (mm,) = _as_m(p, m)
    A = _A(f_m, mm, th, ax)
    S = 1 * A  # d_tau tr: scalar trace with d_tau = 1
    scale = float(np.max(np.abs(f_m.values))) or 1.0
    same = f_m.ktype is None or tuple(f_m.ktype) == (mm,)
    target = f_m.values if same else np.zeros_like(f_m.values)
    rt = float(np.max(np.abs(S - target))) / scale
    steps = th.nodes() - th.min
    right = left = 0.0
    planar = [i for i, ax_ in enumerate(f_m.grid) if ax_.name in ("x", "y")]
    for j in range(th.n):
        factor = np.exp(1j * mm * steps[j])
        shifted = np.roll(A, -j, axis=ax)
        right = max(right, float(np.max(np.abs(shifted - factor * A))))
        # left translation by k_phi also rotates z; exact on the grid for
        # radial charts and quarter turns of a square Cartesian grid
        quarter = steps[j] / (math.pi / 2)
        if planar and not math.isclose(quarter, round(quarter), abs_tol=1e-12):
            continue
        moved = shifted
        if planar:
            # B(theta, v) = A(theta + phi, R_phi v); R_phi v sampled by rot90
            moved = np.rot90(shifted, k=-int(round(quarter)) % 4, axes=tuple(planar))
        left = max(left, float(np.max(np.abs(moved - factor * A))))
    details = {
        "type": mm,
        "input_type": f_m.ktype,
        "roundtrip_defect": rt,
        "right_equivariance_defect": right / scale,
        "left_equivariance_defect": left / scale,
        "character": "tau(k_phi) = exp(-i m phi); A_m f(k_a x k_b) = exp(i m (a + b)) A_m f(x)",
    }
    obs = max(rt, right / scale, left / scale)
    return Report("A-S-roundtrip", p.id, 1e-12, obs, verdict(obs <= 1e-12), details)
