"""File formats: spectrum CSV, spectrum-function CSV, SampledFunction JSON.

All writes are atomic (temporary file in the target directory, then
``os.replace``) and deterministic: floats use ``repr`` and JSON keys are
sorted.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile

import numpy as np

from .errors import GelfandError
from .pairs import get_pair
from .sampling import AXIS_KINDS, SYMMETRIES, SampledFunction
from .transform import SpectrumFunction

__all__ = [
    "SchemaError",
    "atomic_write",
    "write_json",
    "spectrum_columns",
    "spectrum_csv",
    "spectrum_function_csv",
    "read_spectrum_function_csv",
    "validate_sampled_json",
    "load_sampled_function",
]


class SchemaError(GelfandError, ValueError):
    """Input file does not match its schema; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def atomic_write(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    atomic_write(path, dumps(obj))


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


PARAM_COLUMNS = {
    "flat_r1": ("lambda",),
    "e2": ("lambda",),
    "u1_c": ("m", "lambda"),
    "heis1": ("branch", "lambda", "k", "eta"),
}


def spectrum_columns(pair):
    p = get_pair(pair)
    return [f"xi_{i + 1}" for i in range(p.descriptor.ell)] + list(PARAM_COLUMNS[p.id])


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _point_row(p, s):
    return list(s.xi) + [s.params.get(c) for c in PARAM_COLUMNS[p.id]]


def spectrum_csv(pair, points):
    p = get_pair(pair)
    return _csv_text(spectrum_columns(p), [_point_row(p, s) for s in points])


def spectrum_function_csv(gh: SpectrumFunction):
    p = get_pair(gh.pair)
    header = spectrum_columns(p) + ["value_re", "value_im", "weight"]
    w = gh.plancherel_weights
    rows = []
    for i, s in enumerate(gh.points):
        v = gh.values[i]
        rows.append(_point_row(p, s) + [v.real, v.imag, None if w is None else w[i]])
    return _csv_text(header, rows)


def read_spectrum_function_csv(pair, text) -> SpectrumFunction:
    p = get_pair(pair)
    reader = csv.DictReader(io.StringIO(text))
    need = spectrum_columns(p) + ["value_re", "value_im"]
    missing = [c for c in need if c not in (reader.fieldnames or [])]
    if missing:
        raise SchemaError(f"missing columns {missing}", path="header")
    points, vals, weights = [], [], []
    for i, row in enumerate(reader):
        try:
            params = {}
            for c in PARAM_COLUMNS[p.id]:
                raw = row[c]
                if raw == "":
                    continue
                params[c] = raw if c == "branch" else (int(raw) if c in ("m", "k") else float(raw))
            if p.id == "heis1":
                params = {k: v for k, v in params.items() if k in (("branch", "lambda", "k") if params.get("branch") == "fan" else ("branch", "eta"))}
            points.append(p.point(**params))
            vals.append(float(row["value_re"]) + 1j * float(row["value_im"]))
            weights.append(row.get("weight", ""))
        except (ValueError, KeyError, GelfandError) as exc:
            raise SchemaError(str(exc), path=f"row[{i}]") from exc
    w = None
    if weights and all(x not in ("", None) for x in weights):
        w = np.array([float(x) for x in weights])
    return SpectrumFunction(p.id, points, np.array(vals, dtype=complex), w)


def _need(d, key, typ, path):
    if key not in d:
        raise SchemaError("required field missing", path=f"{path}{key}")
    v = d[key]
    if typ is float:
        ok = isinstance(v, (int, float)) and not isinstance(v, bool)
    elif typ is int:
        ok = isinstance(v, int) and not isinstance(v, bool)
    else:
        ok = isinstance(v, typ)
    if not ok:
        raise SchemaError(f"expected {getattr(typ, '__name__', typ)}, got {type(v).__name__}", path=f"{path}{key}")
    return v


def validate_sampled_json(d):
    """Raise :class:`SchemaError` (with a field path) unless ``d`` is a valid SampledFunction."""
    if not isinstance(d, dict):
        raise SchemaError("expected a JSON object", path="$")
    pair = _need(d, "pair", str, "")
    try:
        get_pair(pair)
    except GelfandError as exc:
        raise SchemaError(str(exc), path="pair") from exc
    sym = d.get("symmetry", "bi-K-invariant")
    if sym not in SYMMETRIES:
        raise SchemaError(f"must be one of {list(SYMMETRIES)}", path="symmetry")
    grid = _need(d, "grid", list, "")
    if not grid:
        raise SchemaError("grid must have at least one axis", path="grid")
    size = 1
    for i, ax in enumerate(grid):
        base = f"grid[{i}]."
        if not isinstance(ax, dict):
            raise SchemaError("expected an object", path=f"grid[{i}]")
        _need(ax, "name", str, base)
        lo = _need(ax, "min", float, base)
        hi = _need(ax, "max", float, base)
        n = _need(ax, "n", int, base)
        if n < 1:
            raise SchemaError("must be >= 1", path=base + "n")
        if not lo < hi:
            raise SchemaError("min must be below max", path=base + "min")
        if ax.get("kind", "uniform") not in AXIS_KINDS:
            raise SchemaError(f"must be one of {list(AXIS_KINDS)}", path=base + "kind")
        size *= n
    re = _need(d, "values_re", list, "")
    if len(re) != size:
        raise SchemaError(f"expected {size} values, got {len(re)}", path="values_re")
    im = d.get("values_im")
    if im is not None and len(im) != size:
        raise SchemaError(f"expected {size} values, got {len(im)}", path="values_im")
    for key, arr in (("values_re", re), ("values_im", im or [])):
        for j, v in enumerate(arr):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise SchemaError("expected a number", path=f"{key}[{j}]")
    if sym == "K-type" and "ktype" not in d:
        raise SchemaError("K-type functions need a ktype index", path="ktype")
    return d


def load_sampled_function(path) -> SampledFunction:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", path="$") from exc
    validate_sampled_json(d)
    return SampledFunction.from_json_dict(d)
