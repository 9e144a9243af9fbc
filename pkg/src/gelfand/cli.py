"""Command-line interface.

Exit codes: 0 pass, 1 fail, 2 usage, 3 input/schema, 4 inconclusive.

Options may also come from a flat ``key = value`` config file given by
``--config`` or, failing that, by the ``GELFAND_CONFIG`` environment
variable; command-line flags override file values.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys

import numpy as np

from . import io
from .errors import (
    DecayError,
    DomainError,
    GelfandError,
    GridError,
    InconclusiveError,
    ResolutionError,
    SpecError,
    SymmetryError,
    UnsupportedPairError,
    WeightError,
)
from .ktype import decompose
from .pairs import PAIRS, get_pair
from .pipelines import CHECKS, RunConfig, run_check
from .reports import _plain
from .sampling import Axis
from .schwartz import BumpSpec, bump_interpolate, schwartz_extend, seminorm_table
from .transform import inverse_transform, l2_norm, plancherel_points, spherical_transform

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
ENV_CONFIG = "GELFAND_CONFIG"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_range(text, integer=False):
    """``a:b:n`` (linspace), ``a:b`` (integers, inclusive), ``a,b,c`` or ``a``."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 2:
                lo, hi = int(parts[0]), int(parts[1])
                return list(range(lo, hi + 1))
            if len(parts) == 3:
                lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
                if n < 1:
                    raise ValueError
                vals = np.linspace(lo, hi, n)
                return [int(round(v)) for v in vals] if integer else [float(v) for v in vals]
            raise ValueError
        vals = [v for v in text.split(",") if v.strip()]
        return [int(v) for v in vals] if integer else [float(v) for v in vals]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use a:b:n, a:b or a,b,c") from None


def int_range(text):
    return parse_range(text, integer=True)


def positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def read_config(path):
    cfg = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"config: cannot read {path}: {exc}") from exc
    for i, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {i}: expected key = value")
        k, v = line.split("=", 1)
        cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def config_path(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    ns, _ = pre.parse_known_args(argv)
    return ns.config or os.environ.get(ENV_CONFIG) or None


def _common(p, pair=True):
    p.add_argument("--config", help=f"flat key = value file (default: ${ENV_CONFIG})")
    p.add_argument("--seed", type=int, default=12345, help="64-bit seed, recorded in every output")
    p.add_argument("--out", help="output path (default: stdout)")
    if pair:
        p.add_argument("--pair", choices=sorted(PAIRS), default="e2")


def build_parser():
    ap = argparse.ArgumentParser(prog="gelfand", description="Numerical spherical analysis on small Gelfand pairs.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("spectrum", help="enumerate the embedded spectrum (closed: heis1 includes the limit ray)")
    _common(p)
    p.add_argument("--lambda", dest="lam", type=parse_range, default="0:4:5")
    p.add_argument("--m", type=int_range, default="0")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--eta", type=parse_range, default=None)

    p = sub.add_parser("transform", help="spherical transform of a sampled function (Gf(phi) = int f(x) phi(x^-1) dx)")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--lambda", dest="lam", type=parse_range, default=None, help="explicit lambda nodes (no Plancherel weights)")
    p.add_argument("--m", type=int_range, default=None)
    p.add_argument("--lam-max", type=positive_float, default=12.0)
    p.add_argument("--n-lambda", type=int, default=200)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--kmax", type=int, default=40)

    p = sub.add_parser("invert", help="inverse transform with Plancherel weights (unitarity onto L2 of the spectrum)")
    _common(p)
    p.add_argument("--input", required=True, help="spectrum-function CSV with a weight column")
    p.add_argument("--like", help="SampledFunction JSON giving the grid; the round-trip error against it is recorded")
    p.add_argument("--grid", action="append", help="axis name:min:max:n[:kind], repeatable")

    p = sub.add_parser("verify", help="run a verification suite; exit 0 pass, 1 fail, 4 inconclusive")
    _common(p)
    p.add_argument("check", choices=CHECKS)
    p.add_argument("--tol", type=positive_float, default=None)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--sigmas", type=int, default=20)
    p.add_argument("--step", type=positive_float, default=1e-3)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--Mmax-types", type=int, default=16)
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--lam-max", type=positive_float, default=None)
    p.add_argument("--n-lambda", type=int, default=None)
    p.add_argument("--family", default="gaussian", choices=("gaussian", "abs", "smooth"))
    p.add_argument("--types", type=int_range, default="1,2")

    p = sub.add_parser("decompose", help="K-type components of a K-central function")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--M", type=int, default=16)

    p = sub.add_parser("interpolate", help="bump interpolation of a rapidly decreasing lattice function")
    _common(p, pair=False)
    p.add_argument("--values", required=True, help="m=value pairs, comma separated")
    p.add_argument("--radius", type=positive_float, default=1.0 / 3.0)
    p.add_argument("--spacing", type=positive_float, default=1.0 / 64)

    p = sub.add_parser("extend", help="extend per-type transforms across types to a function on R^2")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--Mmax-types", type=int, default=16)
    p.add_argument("--radius", type=positive_float, default=1.0 / 3.0)
    p.add_argument("--xi2-max", type=positive_float, default=60.0, help="largest xi'' = lambda^2 on the output grid")
    p.add_argument("--n-xi2", type=int, default=601)
    return ap


def _glue_negative_values(argv):
    """Turn ``--opt -1:1:3`` into ``--opt=-1:1:3`` so ranges may start negative."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_args(argv):
    argv = _glue_negative_values(argv)
    ap = build_parser()
    path = config_path(argv)
    cfg = read_config(path) if path else {}
    if cfg:
        for action in ap._subparsers._group_actions:
            for sp in action.choices.values():
                known = {a.dest for a in sp._actions}
                alias = {"lambda": "lam"}
                sp.set_defaults(**{alias.get(k, k): v for k, v in cfg.items() if alias.get(k, k) in known})
    ns = ap.parse_args(argv)
    ns.config_file = path
    return ns


# ---------------------------------------------------------------------------
# output


def emit(ns, text, meta=None):
    if ns.out:
        io.atomic_write(ns.out, text)
        if meta is not None:
            io.write_json(ns.out + ".meta.json", _plain(meta))
    else:
        sys.stdout.write(text)


def base_meta(ns):
    return {"verb": ns.verb, "seed": ns.seed, "pair": getattr(ns, "pair", None), "config_file": ns.config_file}


def load_input(path):
    try:
        return io.load_sampled_function(path)
    except FileNotFoundError as exc:
        raise InputError(f"input: {exc}") from exc
    except GelfandError as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------------------
# verbs


def cmd_spectrum(ns):
    p = get_pair(ns.pair)
    bounds = {"lambda": ns.lam}
    if p.id == "u1_c":
        bounds["m"] = ns.m
    if p.id == "heis1":
        bounds["kmax"] = 0 if ns.kmax is None else ns.kmax
        if ns.eta is not None:
            bounds["eta"] = ns.eta
    pts = p.spectrum_grid(bounds)
    emit(ns, io.spectrum_csv(p, pts), {**base_meta(ns), "rows": len(pts)})
    return EXIT_PASS


def cmd_transform(ns):
    p = get_pair(ns.pair)
    f = load_input(ns.input)
    if f.pair != p.id:
        raise InputError(f"pair: input function lives on {f.pair}, not {p.id}")
    if ns.lam is not None:
        bounds = {"lambda": ns.lam, "m": ns.m or [0], "kmax": ns.kmax}
        pts, w = p.spectrum_grid(bounds), None
    else:
        kw = {"lam_max": ns.lam_max, "n_lambda": ns.n_lambda}
        if p.id == "u1_c":
            kw["m_max"] = ns.m_max
        if p.id == "heis1":
            kw["kmax"] = ns.kmax
        pts, w = plancherel_points(p, **kw)
        if p.id == "u1_c" and f.symmetry == "K-type":
            keep = [i for i, s in enumerate(pts) if (s.params["m"],) == tuple(f.ktype)]
            pts, w = [pts[i] for i in keep], w[keep]
    gh = spherical_transform(p, f, pts)
    gh.plancherel_weights = w
    meta = {**base_meta(ns), **gh.meta, "spectrum_points": len(pts), "input": ns.input}
    emit(ns, io.spectrum_function_csv(gh), meta)
    return EXIT_PASS


def _grid_from_specs(specs):
    axes = []
    for s in specs:
        parts = s.split(":")
        if len(parts) not in (4, 5):
            raise InputError(f"grid: bad axis spec {s!r}")
        try:
            axes.append(Axis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), parts[4] if len(parts) == 5 else "uniform"))
        except (ValueError, GelfandError) as exc:
            raise InputError(f"grid: {exc}") from exc
    return tuple(axes)


def cmd_invert(ns):
    p = get_pair(ns.pair)
    try:
        with open(ns.input) as fh:
            gh = io.read_spectrum_function_csv(p, fh.read())
    except FileNotFoundError as exc:
        raise InputError(f"input: {exc}") from exc
    ref = load_input(ns.like) if ns.like else None
    if ref is not None:
        grid = ref.grid
    elif ns.grid:
        grid = _grid_from_specs(ns.grid)
    else:
        raise UsageError("invert needs --like or --grid")
    f = inverse_transform(p, gh, grid)
    meta = {**base_meta(ns), **f.meta, "nodes": {ax.name: ax.n for ax in grid}, "truncation": f.truncation}
    if ref is not None:
        norm = l2_norm(ref)
        err = l2_norm(ref.with_values(f.values - ref.values))
        meta["roundtrip_relative_l2"] = err / norm if norm > 0 else err
    f.meta.update({"seed": ns.seed})
    emit(ns, f.to_json() + "\n", meta)
    return EXIT_PASS


def cmd_verify(ns):
    cfg = RunConfig(
        pair=ns.pair, tol=ns.tol, seed=ns.seed, points=ns.points, sigmas=ns.sigmas, step=ns.step, N=ns.N, M=ns.M,
        Mmax_types=ns.Mmax_types, kmax=ns.kmax, lam_max=ns.lam_max, n_lambda=ns.n_lambda, family=ns.family, types=tuple(ns.types),
    )
    try:
        rep = run_check(ns.check, cfg)
        d = rep.to_dict()
    except (ResolutionError, InconclusiveError) as exc:
        d = {"check": ns.check, "pair": ns.pair, "tolerance": ns.tol, "observed": None, "pass": False, "status": "inconclusive", "details": {"reason": str(exc)}}
    d["seed"] = ns.seed
    d["config"] = cfg.to_dict()
    emit(ns, json.dumps(_plain(d), sort_keys=True, indent=2) + "\n")
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE, "not applicable": EXIT_PASS}[d["status"]]


def cmd_decompose(ns):
    p = get_pair(ns.pair)
    if not ns.out:
        raise UsageError("decompose writes one file per type; pass --out DIR")
    f = load_input(ns.input)
    dec = decompose(p, f, ns.M)
    os.makedirs(ns.out, exist_ok=True)
    rows = []
    for k, fm in dec.components:
        m = k.m[0]
        fm.meta.update({"seed": ns.seed})
        io.atomic_write(os.path.join(ns.out, f"type_{m:+d}.json"), fm.to_json() + "\n")
        rows.append([m, l2_norm(fm), 0])
    rows.append(["tail", dec.tail_norm, int(dec.tail_norm > 1e-8 * max(dec.norm, 1e-300))])
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "l2_norm", "tail_flag"])
    for r in rows:
        w.writerow([io._fmt(v) for v in r])
    io.atomic_write(os.path.join(ns.out, "index.csv"), buf.getvalue())
    io.write_json(os.path.join(ns.out, "index.csv.meta.json"), _plain({**base_meta(ns), "M": ns.M, "tail_norm": dec.tail_norm, "norm": dec.norm}))
    return EXIT_PASS


def _parse_lattice(text):
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            k, v = item.split("=")
            out[int(k)] = float(v)
        except ValueError:
            raise InputError(f"values: bad item {item!r}; use m=value") from None
    return out


def cmd_interpolate(ns):
    spec = BumpSpec(radius=ns.radius)
    h = bump_interpolate(_parse_lattice(ns.values), spec, spacing=ns.spacing)
    rows = zip(h.axes[0].nodes(), h.values)
    text = io._csv_text(["t", "value"], rows)
    emit(ns, text, {**base_meta(ns), "radius": ns.radius, "spacing": ns.spacing})
    return EXIT_PASS


def cmd_extend(ns):
    p = get_pair(ns.pair)
    f = load_input(ns.input)
    table = seminorm_table(p, f, 2, ns.Mmax_types, xi2_max=ns.xi2_max, n_xi2=ns.n_xi2)
    try:
        u = schwartz_extend(p, table, BumpSpec(radius=ns.radius))
    except DecayError as exc:
        rep = exc.report.to_dict() if exc.report is not None else {}
        sys.stderr.write(f"refused: {exc}\n")
        sys.stdout.write(json.dumps(rep, sort_keys=True, indent=2) + "\n")
        return EXIT_INCONCLUSIVE if exc.report is not None and exc.report.status == "inconclusive" else EXIT_FAIL
    x1, x2 = (ax.nodes() for ax in u.axes)
    rows = ((a, b, u.values[i, j].real, u.values[i, j].imag) for i, a in enumerate(x1) for j, b in enumerate(x2))
    emit(ns, io._csv_text(["xi_1", "xi_2", "value_re", "value_im"], rows), {**base_meta(ns), "types": sorted(table.g), "relative_tail": table.relative_tail})
    return EXIT_PASS


VERBS = {
    "spectrum": cmd_spectrum,
    "transform": cmd_transform,
    "invert": cmd_invert,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "interpolate": cmd_interpolate,
    "extend": cmd_extend,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    try:
        return VERBS[ns.verb](ns)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (InputError, io.SchemaError, GridError, SymmetryError, WeightError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (ResolutionError, InconclusiveError) as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except (UnsupportedPairError, DomainError, SpecError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
