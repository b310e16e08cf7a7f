"""Convex Ginzburg-Landau potentials W on (-inf, 1].

Three kinds are supported:

* ``quadratic``: W(t) = t**2 / 2, so that W(1 - |u|**2) / (2 eps**2) is the
  classical (1 - |u|**2)**2 / (4 eps**2) density.
* ``huber``: quadratic for |t| <= delta and linear beyond. C^1 and convex but
  not strictly convex.
* ``custom``: a sampled table of (t, W, W') with piecewise-linear
  interpolation of both columns.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import InputError, PotentialDomainError

__all__ = [
    "PotentialSpec",
    "AdmissibilityReport",
    "quadratic",
    "huber",
    "custom",
    "parse_potential",
    "load_custom_csv",
    "eval_W",
    "eval_dW",
    "dW_slope",
    "check_admissible",
]

KINDS = ("quadratic", "huber", "custom")


@dataclass(frozen=True)
class PotentialSpec:
    """Immutable description of an admissible potential.

    Use the :func:`quadratic`, :func:`huber` and :func:`custom` constructors
    rather than instantiating directly.
    """

    kind: str
    delta: float | None = None
    table: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]] | None = field(
        default=None, repr=False
    )
    source: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown potential kind {self.kind!r}")
        if self.kind == "huber" and not (self.delta is not None and self.delta > 0):
            raise InputError("huber potential needs delta > 0")
        if self.kind == "custom":
            if self.table is None:
                raise InputError("custom potential needs a (t, W, dW) table")
            t = np.asarray(self.table[0])
            if t.size < 2 or np.any(np.diff(t) <= 0):
                raise InputError("custom grid must be strictly increasing with >= 2 points")
            if t[-1] > 1.0:
                raise InputError("custom grid extends beyond t = 1")

    @property
    def label(self) -> str:
        if self.kind == "quadratic":
            return "quadratic"
        if self.kind == "huber":
            return f"huber:{self.delta!r}"
        return f"file:{self.source}" if self.source else "custom"

    @property
    def t_range(self) -> tuple[float, float]:
        """Interval on which the potential can be evaluated."""
        if self.kind == "custom":
            return float(self.table[0][0]), float(self.table[0][-1])
        return -np.inf, 1.0

    def W(self, t):
        return eval_W(self, t)

    def dW(self, t):
        return eval_dW(self, t)


def quadratic() -> PotentialSpec:
    return PotentialSpec("quadratic")


def huber(delta: float) -> PotentialSpec:
    return PotentialSpec("huber", delta=float(delta))


def custom(t, W, dW, source: str | None = None) -> PotentialSpec:
    """Build a sampled potential from three equal-length columns."""
    t, W, dW = (np.asarray(c, dtype=float).ravel() for c in (t, W, dW))
    if not (t.shape == W.shape == dW.shape):
        raise InputError("t, W and dW columns must have equal length")
    if not np.all(np.isfinite(np.concatenate([t, W, dW]))):
        raise InputError("custom potential table contains non-finite values")
    return PotentialSpec("custom", table=(tuple(t), tuple(W), tuple(dW)), source=source)


def load_custom_csv(path) -> PotentialSpec:
    """Read a ``t,W,dW`` CSV file into a custom potential."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [h.strip() for h in reader.fieldnames] != ["t", "W", "dW"]:
            raise InputError(f"{path}: expected header 't,W,dW'")
        try:
            rows = [(float(r["t"]), float(r["W"]), float(r["dW"])) for r in reader]
        except (TypeError, ValueError) as exc:
            raise InputError(f"{path}: unreadable row ({exc})") from None
    if not rows:
        raise InputError(f"{path}: empty potential table")
    cols = list(zip(*rows))
    return custom(cols[0], cols[1], cols[2], source=str(path))


def parse_potential(selector) -> PotentialSpec:
    """Resolve ``"quadratic"``, ``"huber:<delta>"`` or ``"file:<path>"``."""
    if isinstance(selector, PotentialSpec):
        return selector
    s = str(selector).strip()
    if s == "quadratic":
        return quadratic()
    if s.startswith("huber:"):
        try:
            delta = float(s.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad huber delta in {selector!r}") from None
        return huber(delta)
    if s.startswith("file:"):
        return load_custom_csv(s.split(":", 1)[1])
    raise InputError(f"unknown potential selector {selector!r}")


def _checked(p: PotentialSpec, t):
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)):
        raise PotentialDomainError("potential evaluated at NaN")
    lo, hi = p.t_range
    if np.any(t > 1.0):
        raise PotentialDomainError(f"potential evaluated at t = {np.max(t)!r} > 1")
    if p.kind == "custom" and (np.any(t < lo) or np.any(t > hi)):
        raise PotentialDomainError(
            f"custom potential evaluated outside its table [{lo}, {hi}] (no extrapolation)"
        )
    return t


def _scalar_or_array(t_in, out):
    return float(out) if np.ndim(t_in) == 0 else out


def eval_W(p: PotentialSpec, t):
    """Evaluate W(t); raises :class:`PotentialDomainError` if t > 1."""
    tt = _checked(p, t)
    if p.kind == "quadratic":
        out = 0.5 * tt * tt
    elif p.kind == "huber":
        d = p.delta
        a = np.abs(tt)
        out = np.where(a <= d, 0.5 * tt * tt, d * a - 0.5 * d * d)
    else:
        out = np.interp(tt, p.table[0], p.table[1])
    return _scalar_or_array(t, out)


def eval_dW(p: PotentialSpec, t):
    """Evaluate W'(t); continuous across the Huber kink."""
    tt = _checked(p, t)
    if p.kind == "quadratic":
        out = tt.copy() if tt.ndim else tt
    elif p.kind == "huber":
        out = np.clip(tt, -p.delta, p.delta)
    else:
        out = np.interp(tt, p.table[0], p.table[2])
    return _scalar_or_array(t, out)


def dW_slope(p: PotentialSpec, t, h: float = 1e-6):
    """Symmetric-difference slope of W', clamped to the domain.

    Stands in for W'' in Newton linearizations, so potentials without a
    classical second derivative (Huber) are handled.
    """
    tt = np.asarray(t, dtype=float)
    lo, hi = p.t_range
    tp = np.minimum(tt + h, hi)
    tm = np.maximum(tt - h, lo)
    out = (eval_dW(p, tp) - eval_dW(p, tm)) / (tp - tm)
    return _scalar_or_array(t, out)


@dataclass
class AdmissibilityReport:
    """Outcome of :func:`check_admissible`. Violations are reported, never raised."""

    zero_at_origin: bool
    positive: bool
    convex: bool
    monotone_derivative: bool
    W_at_zero: float
    positivity_violations: list[float]
    worst_triple: tuple[float, float, float] | None
    worst_secant_gap: float
    worst_derivative_pair: tuple[float, float] | None
    worst_derivative_drop: float
    n_samples: int
    window: tuple[float, float]

    @property
    def passed(self) -> bool:
        return self.zero_at_origin and self.positive and self.convex and self.monotone_derivative

    def as_dict(self) -> dict:
        return {
            "zero_at_origin": self.zero_at_origin,
            "positive": self.positive,
            "convex": self.convex,
            "monotone_derivative": self.monotone_derivative,
            "passed": self.passed,
            "W_at_zero": self.W_at_zero,
            "positivity_violations": self.positivity_violations,
            "worst_triple": self.worst_triple,
            "worst_secant_gap": self.worst_secant_gap,
            "worst_derivative_pair": self.worst_derivative_pair,
            "worst_derivative_drop": self.worst_derivative_drop,
            "n_samples": self.n_samples,
            "window": self.window,
        }


def check_admissible(
    p: PotentialSpec,
    n_samples: int = 200,
    seed: int = 0,
    T: float = 3.0,
    atol: float = 1e-12,
) -> AdmissibilityReport:
    """Sample W on [-T, 1] and test W(0) = 0, positivity, convexity, monotone W'.

    Convexity is tested on consecutive sampled triples, which for a sorted
    sample implies the secant inequality for every triple. ``atol`` absorbs
    rounding in the secant slopes of exactly linear pieces.
    """
    if n_samples < 3:
        raise InputError("check_admissible needs n_samples >= 3")
    if T <= 0:
        raise InputError("sampling window half-width T must be positive")
    lo, hi = max(-T, p.t_range[0]), min(1.0, p.t_range[1])
    rng = np.random.default_rng(seed)
    pts = [rng.uniform(lo, hi, size=n_samples), [lo, hi]]
    if lo <= 0.0 <= hi:
        pts.append([0.0])
    if p.kind == "custom":
        grid = np.asarray(p.table[0])
        pts.append(grid[(grid >= lo) & (grid <= hi)])
    t = np.unique(np.concatenate([np.asarray(a, dtype=float) for a in pts]))
    W = np.asarray(eval_W(p, t))
    dW = np.asarray(eval_dW(p, t))

    has_zero = lo <= 0.0 <= hi
    W0 = float(eval_W(p, 0.0)) if has_zero else float("nan")
    zero_ok = has_zero and abs(W0) <= atol

    nonzero = t != 0.0
    bad = nonzero & ~(W > 0.0)
    positivity_violations = [float(x) for x in t[bad]]

    slopes = np.diff(W) / np.diff(t)
    scale = atol * (1.0 + np.abs(slopes[:-1]) + np.abs(slopes[1:]))
    gaps = slopes[1:] - slopes[:-1]
    k = int(np.argmin(gaps + scale)) if gaps.size else 0
    convex = bool(np.all(gaps >= -scale))
    worst_gap = float(gaps[k]) if gaps.size else 0.0
    worst_triple = (float(t[k]), float(t[k + 1]), float(t[k + 2])) if gaps.size else None

    drops = np.diff(dW)
    j = int(np.argmin(drops)) if drops.size else 0
    monotone = bool(np.all(drops >= -atol * (1.0 + np.abs(dW[1:]))))

    return AdmissibilityReport(
        zero_at_origin=bool(zero_ok),
        positive=not positivity_violations,
        convex=convex,
        monotone_derivative=monotone,
        W_at_zero=W0,
        positivity_violations=positivity_violations,
        worst_triple=worst_triple,
        worst_secant_gap=worst_gap,
        worst_derivative_pair=(float(t[j]), float(t[j + 1])) if drops.size else None,
        worst_derivative_drop=float(drops[j]) if drops.size else 0.0,
        n_samples=int(t.size),
        window=(float(lo), float(hi)),
    )
