"""Structured grids and sampled functions.

A grid is a tuple of named :class:`Axis` objects.  Axis names double as
chart coordinates: ``x``, ``y`` (planar), ``r`` (radial, for functions that
are rotation invariant in the plane), ``t`` (Heisenberg center) and
``theta`` (the torus K).  Values are stored in row-major order over the axes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import GridError
from .specfun import gauss_legendre

AXIS_KINDS = ("uniform", "periodic", "gauss")
SYMMETRIES = ("bi-K-invariant", "K-central", "K-type", "none")


@dataclass(frozen=True)
class Axis:
    """One grid axis.

    ``uniform`` includes both endpoints (trapezoid weights), ``periodic``
    excludes ``max`` (equal weights, spectrally exact for trigonometric
    polynomials), ``gauss`` uses Gauss-Legendre nodes on ``[min, max]``.
    """

    name: str
    min: float
    max: float
    n: int
    kind: str = "uniform"

    def __post_init__(self):
        if self.kind not in AXIS_KINDS:
            raise GridError(f"unknown axis kind {self.kind!r}")
        if self.n < 1 or not self.min < self.max:
            raise GridError(f"bad axis {self.name}: [{self.min}, {self.max}] with n={self.n}")

    @property
    def spacing(self):
        if self.kind == "uniform":
            return (self.max - self.min) / (self.n - 1) if self.n > 1 else self.max - self.min
        if self.kind == "periodic":
            return (self.max - self.min) / self.n
        raise GridError(f"axis {self.name} is not equispaced")

    def nodes(self):
        if self.kind == "gauss":
            return gauss_legendre(self.n, self.min, self.max).nodes
        return self.min + np.arange(self.n) * self.spacing

    def weights(self):
        if self.kind == "gauss":
            return gauss_legendre(self.n, self.min, self.max).weights
        h = self.spacing
        w = np.full(self.n, h)
        if self.kind == "uniform" and self.n > 1:
            w[0] = w[-1] = 0.5 * h
        return w

    def to_dict(self):
        return {"name": self.name, "min": self.min, "max": self.max, "n": self.n, "kind": self.kind}

    @classmethod
    def from_dict(cls, d):
        return cls(str(d["name"]), float(d["min"]), float(d["max"]), int(d["n"]), str(d.get("kind", "uniform")))


def periodic_theta(n):
    return Axis("theta", 0.0, 2 * np.pi, n, "periodic")


def theta_nodes_for(M):
    """Torus node count used when projecting onto types up to ``M``."""
    return 4 * M + 8


def grid_shape(grid: Sequence[Axis]):
    return tuple(ax.n for ax in grid)


def grid_names(grid: Sequence[Axis]):
    return tuple(ax.name for ax in grid)


def mesh(grid: Sequence[Axis]):
    """Broadcastable coordinate arrays keyed by axis name."""
    out = {}
    d = len(grid)
    for i, ax in enumerate(grid):
        shape = [1] * d
        shape[i] = ax.n
        out[ax.name] = ax.nodes().reshape(shape)
    return out


@dataclass
class SampledFunction:
    """A function on G (or G/K, or H) given by values on a structured grid.

    ``pair`` is a pair id string.  ``symmetry`` is one of
    ``bi-K-invariant``, ``K-central``, ``K-type`` (with ``ktype`` set) or
    ``none``.  ``meta`` collects warnings and provenance; it is serialized.
    """

    pair: str
    grid: tuple
    values: np.ndarray
    symmetry: str = "bi-K-invariant"
    ktype: tuple | None = None
    truncation: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = tuple(self.grid)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != grid_shape(self.grid):
            if self.values.size != int(np.prod(grid_shape(self.grid))):
                raise GridError(f"{self.values.size} values for grid of shape {grid_shape(self.grid)}")
            self.values = self.values.reshape(grid_shape(self.grid))
        if self.symmetry not in SYMMETRIES:
            raise GridError(f"unknown symmetry tag {self.symmetry!r}")
        if self.symmetry == "K-type" and self.ktype is None:
            raise GridError("K-type symmetry needs a ktype index")
        if self.ktype is not None:
            self.ktype = tuple(int(m) for m in np.atleast_1d(self.ktype))
        if self.truncation is None:
            self.truncation = _default_truncation(self.grid)

    @property
    def names(self):
        return grid_names(self.grid)

    def axis(self, name):
        for ax in self.grid:
            if ax.name == name:
                return ax
        raise GridError(f"grid has no {name!r} axis (axes: {self.names})")

    def mesh(self):
        return mesh(self.grid)

    def with_values(self, values, **changes):
        return replace(self, values=np.asarray(values, dtype=complex), meta=dict(self.meta), **changes)

    # --- serialization -------------------------------------------------
    def to_json_dict(self):
        flat = self.values.ravel()
        d = {
            "pair": self.pair,
            "symmetry": self.symmetry,
            "grid": [ax.to_dict() for ax in self.grid],
            "values_re": flat.real.tolist(),
            "values_im": flat.imag.tolist(),
            "truncation": self.truncation,
        }
        if self.ktype is not None:
            d["ktype"] = list(self.ktype)
        if self.meta:
            d["meta"] = self.meta
        return d

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d):
        grid = tuple(Axis.from_dict(a) for a in d["grid"])
        values = np.asarray(d["values_re"], dtype=float) + 1j * np.asarray(d.get("values_im") or np.zeros(len(d["values_re"])), dtype=float)
        return cls(
            pair=d["pair"],
            grid=grid,
            values=values,
            symmetry=d.get("symmetry", "bi-K-invariant"),
            ktype=d.get("ktype"),
            truncation=d.get("truncation"),
            meta=dict(d.get("meta", {})),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))


def _default_truncation(grid):
    radii = [max(abs(ax.min), abs(ax.max)) for ax in grid if ax.name in ("x", "y", "r", "t")]
    return float(max(radii)) if radii else None


def sample(pair, grid, func, symmetry="bi-K-invariant", ktype=None):
    """Evaluate ``func(**mesh)`` on ``grid`` and wrap it as a SampledFunction."""
    grid = tuple(grid)
    vals = np.broadcast_to(np.asarray(func(**mesh(grid)), dtype=complex), grid_shape(grid))
    return SampledFunction(pair, grid, np.array(vals), symmetry=symmetry, ktype=ktype)


@dataclass
class GridFunction:
    """A function on a box in R^d sampled on uniform axes (spectral side)."""

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        self.axes = tuple(self.axes)
        self.values = np.asarray(self.values)
        if self.values.shape != grid_shape(self.axes):
            raise GridError(f"values of shape {self.values.shape} for axes {grid_shape(self.axes)}")
        for ax in self.axes:
            if ax.kind != "uniform":
                raise GridError("grid functions need uniform axes")

    def nodes(self):
        return [ax.nodes() for ax in self.axes]

    def norm_mesh(self):
        """|xi| at every grid node."""
        sq = 0.0
        for name, arr in mesh(self.axes).items():
            sq = sq + arr**2
        return np.sqrt(np.broadcast_to(sq, self.values.shape))
