"""Fit the Plancherel constant of each pair from Gaussian round trips.

For each pair the weights returned by ``plancherel_points`` are divided by the
tabulated constant, leaving the bare quadrature measure.  The fitted constant
is ``||f||^2 / sum(w |Gf|^2)`` and is printed next to the tabulated one.

Usage: python3 scripts/calibrate_plancherel.py
"""
import numpy as np

from gelfand.pipelines import RunConfig, gaussian_family, heis_smooth_family, plancherel_grid
from gelfand.transform import PLANCHEREL_CONSTANTS, l2_norm, plancherel_points, spherical_transform


def fit(pair, f):
    points, weights = plancherel_points(pair, **plancherel_grid(pair, RunConfig(pair=pair)))
    bare = weights / PLANCHEREL_CONSTANTS[pair]
    gh = spherical_transform(pair, f, points)
    return l2_norm(f) ** 2 / float(np.sum(bare * np.abs(gh.values) ** 2))


def main():
    cases = [(p, gaussian_family(p)) for p in ("flat_r1", "e2", "u1_c", "heis1")]
    cases.append(("heis1", heis_smooth_family()))
    print(f"{'pair':8s} {'fitted':>14s} {'tabulated':>14s} {'rel diff':>10s}")
    for pair, f in cases:
        c = fit(pair, f)
        ref = PLANCHEREL_CONSTANTS[pair]
        print(f"{pair:8s} {c:14.10f} {ref:14.10f} {abs(c / ref - 1):10.2e}")


if __name__ == "__main__":
    main()
