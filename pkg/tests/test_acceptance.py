"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line; the lines are printed together at the
end of the run.
"""
import math
import time

import numpy as np
import pytest

from gelfand.errors import DecayError
from gelfand.ktype import decompose, project_ktype, verify_type_orthogonality
from gelfand.pairs import get_pair, group_convolve
from gelfand.pipelines import (
    RunConfig,
    conv_pair_family,
    decay_family,
    generator_system,
    random_group_points,
    random_radial,
    random_sigmas,
    suite_commutativity,
    suite_plancherel,
)
from gelfand.sampling import Axis, periodic_theta, sample
from gelfand.schwartz import (
    LATTICE_SPACING,
    BumpSpec,
    bump_constant,
    bump_interpolate,
    change_of_generators,
    euclid_seminorm,
    fit_decay,
    schwartz_extend,
    seminorm_table,
    verify_decay,
)
from gelfand.transform import (
    spherical_transform,
    verify_eigen,
    verify_multiplicativity,
    verify_positive_definite,
)

PAIRS = ["flat_r1", "e2", "u1_c", "heis1"]
SEED = 20240601


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def finish(record, number, checks, elapsed, budget):
    """Record and assert: ``checks`` maps a label to (ok, observed text)."""
    ok = all(c for c, _ in checks.values()) and elapsed < budget
    text = "; ".join(f"{k}: {v}" for k, (_, v) in checks.items())
    record(number, ok, f"{text}; runtime {elapsed:.1f}s (< {budget:g}s)")
    failed = [k for k, (c, _) in checks.items() if not c]
    assert not failed, f"criterion {number} failed for {failed}: {text}"
    assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"


def test_criterion_01_normalization_and_boundedness(record_criterion):
    rng = np.random.default_rng(SEED)
    checks = {}
    with Timer() as t:
        for pair in PAIRS:
            p = get_pair(pair)
            sigmas = random_sigmas(p, rng, 200, lam_max=10.0, m_max=20, kmax=40)
            xs = random_group_points(p, rng, 200, scale=10.0)
            coords = p.coord_arrays(xs)
            e = p.coords(p.identity())
            at_e = max(abs(complex(np.asarray(p.phi(s, **e))) - 1) for s in sigmas)
            sup = max(float(np.max(np.abs(p.phi(s, **coords)))) for s in sigmas)
            checks[pair] = (at_e < 1e-12 and sup <= 1 + 1e-12, f"|phi(e)-1|={at_e:.1e} sup={sup:.15f}")
    finish(record_criterion, 1, checks, t.elapsed, 5)


def test_criterion_02_eigen_residuals(record_criterion):
    rng = np.random.default_rng(SEED)
    spec = {"e2": {"lam_max": 4.0}, "u1_c": {"lam_max": 4.0, "m_max": 8}, "heis1": {"lam_max": 4.0, "kmax": 10}}
    checks = {}
    with Timer() as t:
        for pair, kw in spec.items():
            worst = max(verify_eigen(pair, s, 1e-3, 1e-3).observed for s in random_sigmas(pair, rng, 40, **kw))
            checks[pair] = (worst < 1e-3, f"max residual {worst:.2e}")
    finish(record_criterion, 2, checks, t.elapsed, 60)


def test_criterion_03_positive_definite(record_criterion):
    rng = np.random.default_rng(SEED)
    checks = {}
    with Timer() as t:
        for pair in PAIRS:
            worst = min(
                verify_positive_definite(pair, s, random_group_points(pair, rng, 50), 1e-8).observed
                for s in random_sigmas(pair, rng, 20)
            )
            checks[pair] = (worst >= -1e-8, f"min eigenvalue {worst:.1e}")
    finish(record_criterion, 3, checks, t.elapsed, 30)


def test_criterion_04_hankel_gaussian(record_criterion):
    with Timer() as t:
        f = sample("e2", (Axis("r", 0.0, 20.0, 2000, "gauss"),), lambda r: np.exp(-r * r / 2))
        lams = np.linspace(0.0, 6.0, 121)
        gh = spherical_transform("e2", f, get_pair("e2").spectrum_grid({"lambda": lams}))
        err = float(np.max(np.abs(gh.values - 2 * math.pi * np.exp(-lams**2 / 2))))
    finish(record_criterion, 4, {"e2": (err < 1e-6, f"max error {err:.1e}")}, t.elapsed, 1)


def test_criterion_05_plancherel_and_roundtrip(record_criterion):
    bounds = {"e2": 1e-5, "u1_c": 1e-5, "heis1": 1e-3}
    checks = {}
    with Timer() as t:
        for pair, tol in bounds.items():
            rep = suite_plancherel(RunConfig(pair=pair, tol=tol, kmax=40))
            rt = rep.details["roundtrip_relative_l2"]
            pl = abs(rep.details["ratio"] - 1)
            checks[pair] = (rt < tol and pl < tol, f"roundtrip {rt:.1e}, plancherel {pl:.1e} (tol {tol:g})")
    finish(record_criterion, 5, checks, t.elapsed, 120)


def test_criterion_06_multiplicativity_and_commutativity(record_criterion):
    checks = {}
    with Timer() as t:
        for pair in PAIRS:
            f, g, pts = conv_pair_family(pair)
            mult = verify_multiplicativity(pair, f, g, pts, 1e-3).observed
            comm = suite_commutativity(RunConfig(pair=pair, seed=SEED, tol=1e-3)).observed
            checks[pair] = (mult < 1e-3 and comm < 1e-3, f"mult {mult:.1e} comm {comm:.1e}")
    finish(record_criterion, 6, checks, t.elapsed, 60)


def test_criterion_07_ktype_algebra(record_criterion):
    p = get_pair("u1_c")
    checks = {}
    with Timer() as t:
        f = decay_family("gaussian", Mmax_types=16, n_r=80)
        proj = 0.0
        for m in range(-6, 7):
            fm = project_ktype(p, f, m)
            proj = max(proj, float(np.max(np.abs(project_ktype(p, fm, m).values - fm.values))))
            for n in (m - 1, m + 2):
                proj = max(proj, float(np.max(np.abs(project_ktype(p, fm, n).values))))
        checks["projection"] = (proj < 1e-12, f"{proj:.1e}")

        ax = (periodic_theta(12), Axis("x", -7.0, 7.0, 57), Axis("y", -7.0, 7.0, 57))
        a = sample("u1_c", ax, lambda theta, x, y: (1 + np.cos(theta) + np.sin(2 * theta) + np.cos(5 * theta)) * np.exp(-(x * x + y * y) / 2), symmetry="K-central")
        b = sample("u1_c", ax, lambda theta, x, y: (1 + np.sin(theta) + np.cos(2 * theta) + np.sin(5 * theta)) * np.exp(-(x * x + y * y)), symmetry="K-central")
        cross = max(verify_type_orthogonality(p, project_ktype(p, a, m1), project_ktype(p, b, m2), 1e-10).observed for m1, m2 in [(1, 2), (0, 5), (-1, 1), (2, -2)])
        checks["cross-type"] = (cross < 1e-10, f"{cross:.1e}")

        dec = decompose(p, f, 16)
        tail = dec.tail_norm / dec.norm
        checks["tail M=16"] = (tail < 1e-8, f"{tail:.1e}")

        ff, gg, _ = conv_pair_family("u1_c")
        worst = 0.0
        for m in (-2, -1, 0, 1, 2):
            fm, gm = project_ktype(p, ff, m), project_ktype(p, gg, m)
            pts = p.spectrum_grid({"m": [m], "lambda": [0.0, 0.7, 1.5, 2.5]})
            lhs = spherical_transform(p, group_convolve(p, fm, gm), pts).values
            rhs = spherical_transform(p, fm, pts).values * spherical_transform(p, gm, pts).values
            if np.max(np.abs(rhs)) > 0:
                worst = max(worst, float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs))))
        checks["per-type mult"] = (worst < 1e-3, f"{worst:.1e}")
    finish(record_criterion, 7, checks, t.elapsed, 60)


def test_criterion_08_interpolation(record_criterion):
    rng = np.random.default_rng(SEED)
    per = int(round(1 / LATTICE_SPACING))
    checks = {}
    with Timer() as t:
        A = [bump_constant(BumpSpec(), N) for N in range(4)]
        exact, worst = True, 0.0
        for _ in range(50):
            c = rng.uniform(0.2, 2.0)
            a = {m: float(rng.normal() * math.exp(-c * m * m / 4)) for m in range(-8, 9)}
            h = bump_interpolate(a)
            lo = int(round(h.axes[0].min))
            exact &= all(h.values[(m - lo) * per] == v for m, v in a.items())
            for N in range(4):
                rhs = A[N] * max((1 + abs(m)) ** N * abs(v) for m, v in a.items())
                worst = max(worst, euclid_seminorm(h, N) / rhs)
        checks["lattice"] = (exact, "exact" if exact else "mismatch")
        checks["bound N<=3"] = (worst <= 1 + 1e-12, f"max lhs/rhs {worst:.12f}")

        table = seminorm_table("u1_c", decay_family("gaussian", Mmax_types=16, n_r=120), 2, 16, xi2_max=30.0, n_xi2=301)
        u = schwartz_extend("u1_c", table)
        lo = int(round(u.axes[0].min))
        restr = max(float(np.max(np.abs(u.values[(m - lo) * per] - g))) for m, g in table.g.items())
        checks["extension"] = (restr == 0.0, f"max |u(m,.) - g_m| {restr:.1e}")
    finish(record_criterion, 8, checks, t.elapsed, 30)


def test_criterion_09_decay_dichotomy(record_criterion):
    checks = {}
    with Timer() as t:
        smooth = decay_family("gaussian", Mmax_types=16)
        reps = [verify_decay("u1_c", smooth, 2, M) for M in range(5)]
        slopes = ", ".join(f"{r.slope:.1f}" for r in reps)
        checks["gaussian M<=4"] = (all(r.passed for r in reps), f"slopes {slopes}")
        rough = verify_decay("u1_c", decay_family("abs", Mmax_types=16), 2, 4)
        ok = rough.status == "fail" and -2.3 <= rough.slope <= -1.7
        checks["|theta| M=4"] = (ok, f"{rough.status}, slope {rough.slope:.3f}")
    finish(record_criterion, 9, checks, t.elapsed, 60)


def test_criterion_10_generator_change(record_criterion):
    checks = {}
    with Timer() as t:
        for pair in ("e2", "heis1"):
            P, Q, pts = generator_system(pair)
            rep = change_of_generators(pair, P, Q, pts, tol=1e-10)
            m = rep.details["exponent"]
            checks[pair] = (rep.passed and m == 2, f"QP defect {rep.observed:.1e}, m={m} (slope {rep.details['slope']:.4f})")
    finish(record_criterion, 10, checks, t.elapsed, 10)
