"""Verification reports shared by the check functions and the CLI."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

STATUSES = ("pass", "fail", "inconclusive", "not applicable")


def _plain(v):
    """Convert numpy scalars/arrays and complex numbers into JSON-friendly values."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        if np.isnan(f):
            return "nan"
        if np.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _plain(v.real), "im": _plain(v.imag)}
    return v


@dataclass
class Report:
    """Outcome of one check: ``observed`` is compared against ``tolerance``."""

    check: str
    pair: str
    tolerance: float | None
    observed: float | None
    status: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        return _plain(
            {
                "check": self.check,
                "pair": self.pair,
                "tolerance": self.tolerance,
                "observed": self.observed,
                "pass": self.passed,
                "status": self.status,
                "details": self.details,
            }
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def __str__(self):
        return f"{self.check} [{self.pair}] {self.status}: observed={self.observed!r} tol={self.tolerance!r}"


def verdict(ok: bool) -> str:
    return "pass" if ok else "fail"
