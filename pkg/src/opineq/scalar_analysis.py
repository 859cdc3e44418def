"""Hermite-Hadamard checks, convexity scans and the auxiliary sign catalog.

The catalog is a static table of named scalar functions, each carrying a
machine-checkable claim (sign or monotonicity) over a rectangular
parameter region.  Names are stable; the CLI addresses entries by them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import scalar_bounds as sb
from .scalar_bounds import ppow

__all__ = [
    "C_CONST",
    "C_VALUE",
    "X_CAP",
    "X_FLOOR",
    "Interval",
    "HHReport",
    "ConvexityVerdict",
    "AuxFunctionEntry",
    "SignReport",
    "EvaluationError",
    "RegionError",
    "simpson",
    "hh_verify",
    "convexity_scan",
    "CATALOG",
    "aux_eval",
    "aux_names",
    "default_grid",
    "check_sign_region",
    "log_gap",
    "lemma21_f",
    "lemma22_g",
]

C_CONST = Fraction(2**7 - 1, 5**4)
C_VALUE = float(C_CONST)

# Grid caps for half-lines: x >= 1 is sampled up to X_CAP, 0 < x <= 1 from X_FLOOR.
X_CAP = 1.0e3
X_FLOOR = 1.0e-3


class EvaluationError(ValueError):
    """A function returned a non-finite value on the evaluation grid."""


class RegionError(ValueError):
    """A requested grid leaves the claim region of a catalog entry."""


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def span(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class HHReport:
    midpoint_value: float
    mean_integral: float
    endpoint_average: float
    chain_holds: bool
    quadrature_error_estimate: float
    shape: str = "convex"
    panels: int = 0

    def chain(self) -> tuple[float, float, float]:
        return (self.midpoint_value, self.mean_integral, self.endpoint_average)


def _evaluate(f, x):
    x = np.asarray(x, dtype=float)
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).astype(float)
    except (TypeError, ValueError):
        y = np.array([float(f(float(t))) for t in x.ravel()]).reshape(x.shape)
    bad = ~np.isfinite(y)
    if np.any(bad):
        where = float(x[bad].ravel()[0])
        raise EvaluationError(f"non-finite function value at x = {where!r}")
    return y


def simpson(f, lo, hi, n_panels):
    """Composite Simpson rule with ``n_panels`` (even) subintervals."""
    if n_panels % 2:
        n_panels += 1
    x = np.linspace(lo, hi, n_panels + 1)
    y = _evaluate(f, x)
    h = (hi - lo) / n_panels
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def _integrate(f, iv: Interval, n_panels: int, rel_tol=1e-10, max_panels=2**20):
    n = n_panels + (n_panels % 2)
    prev = simpson(f, iv.lo, iv.hi, n)
    while True:
        n2 = 2 * n
        cur = simpson(f, iv.lo, iv.hi, n2)
        diff = abs(cur - prev)
        # Richardson: the error of the finer Simpson sum is about diff / 15.
        est = cur + (cur - prev) / 15.0
        if diff <= rel_tol * max(abs(cur), 1e-300) or n2 >= max_panels:
            return est, diff / 15.0, n2
        prev, n = cur, n2


def hh_verify(f: Callable, iv: Interval, shape: str = "convex", n_panels: int = 16) -> HHReport:
    """Evaluate the midpoint / integral-mean / endpoint-average chain of ``f``.

    For ``shape="convex"`` the chain is expected increasing, for
    ``"concave"`` decreasing.  The integral is computed by composite Simpson
    with panel doubling, and the chain is accepted within
    ``max(1e-9, 10 * error_estimate)``.
    """
    if shape not in ("convex", "concave"):
        raise ValueError(f"shape must be 'convex' or 'concave', got {shape!r}")
    if n_panels < 16:
        raise ValueError("n_panels must be at least 16")
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    ends = _evaluate(f, np.array([iv.lo, 0.5 * (iv.lo + iv.hi), iv.hi]))
    integral, err, panels = _integrate(f, iv, n_panels)
    mid, mean, avg = float(ends[1]), integral / iv.span, 0.5 * float(ends[0] + ends[2])
    err = abs(err) / iv.span
    tol = max(1e-9, 10.0 * err)
    if shape == "convex":
        holds = mean - mid >= -tol and avg - mean >= -tol
    else:
        holds = mid - mean >= -tol and mean - avg >= -tol
    return HHReport(mid, mean, avg, bool(holds), err, shape, panels)


@dataclass(frozen=True)
class ConvexityVerdict:
    kind: str  # "convex", "concave" or "mixed"
    convex: bool
    concave: bool
    witness: float | None = None
    min_second_difference: float = 0.0
    max_second_difference: float = 0.0


def convexity_scan(f: Callable, iv: Interval, grid_n: int = 200, noise=1e-9) -> ConvexityVerdict:
    """Classify ``f`` on ``iv`` by the sign of its second differences.

    An affine function is both convex and concave; its ``kind`` is reported
    as ``"convex"`` with ``concave`` also set.  For a mixed verdict the
    witness is the first grid abscissa where the sign flips.
    """
    if grid_n < 8:
        raise ValueError("grid_n must be at least 8")
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    x = np.linspace(iv.lo, iv.hi, grid_n + 1)
    y = _evaluate(f, x)
    d2 = y[:-2] - 2.0 * y[1:-1] + y[2:]
    floor = noise * (1.0 + np.abs(y[1:-1]))
    pos = d2 > floor
    neg = d2 < -floor
    convex, concave = not neg.any(), not pos.any()
    if convex:
        kind, witness = "convex", None
    elif concave:
        kind, witness = "concave", None
    else:
        kind = "mixed"
        first_pos, first_neg = int(np.argmax(pos)), int(np.argmax(neg))
        # the flip happens where the later of the two signs first appears
        witness = float(x[1 + max(first_pos, first_neg)])
    return ConvexityVerdict(kind, convex, concave, witness, float(d2.min()), float(d2.max()))


def lemma21_f(v):
    """``t -> v(1 - t^(v-1))``: concave on ``t > 0``; integrates to ``(1-v) + vx - x^v`` over ``[1, x]``."""
    return lambda t: v * (1.0 - np.power(t, v - 1.0))


def lemma22_g(v):
    """``t -> v(1-v)(t-1)/t^(v+1)``: concave up to ``t = 1 + 2/v``, convex beyond."""
    return lambda t: v * (1.0 - v) * (t - 1.0) / np.power(t, v + 1.0)


# --------------------------------------------------------------------------
# auxiliary functions


def _u_v(v, x):
    r = np.minimum(v, 1.0 - v)
    return v * (x - 1.0) * (1.0 - ppow(x, v - 1.0)) / 2.0 - r * (1.0 - np.sqrt(x)) ** 2


def _w_v(v, x):
    R = np.maximum(v, 1.0 - v)
    return R * (1.0 - np.sqrt(x)) ** 2 - v * (x - 1.0) * (1.0 - ppow(0.5 * (x + 1.0), v - 1.0))


def _w_core(v, x):
    return (1.0 - np.sqrt(x)) ** 2 - (x - 1.0) * (1.0 - ppow(0.5 * (x + 1.0), v - 1.0))


def _mM_gap(v, x):
    return sb.M_factor(v, x) - sb.m_factor(v, x)


def _mM_gap_slope(v, x):
    lead = 2.0 * x**2 * ((1.0 - v) * x + v + 3.0) * ppow(2.0 * x / (x + 1.0), v)
    return lead - ((1.0 - v) * x**3 + (3.0 - v) * x**2 + (v + 3.0) * x + (v + 1.0))


def _mM_gap_slope_bound(v, x):
    return (1.0 - v) * x**3 + 3.0 * (v + 1.0) * x**2 - (v + 3.0) * x - (v + 1.0)


def _log_mean_bound(x):
    t = 0.5 * (x + 1.0)
    sx = np.sqrt(x)
    return ppow(t, 2.0 / 3.0) - (sx + 1.0) / (2.0 * sx) * (1.0 + np.log(t))


def _log_power_poly(s):
    ls = np.log(s)
    return 4 * s**5 - 3 * s**3 - 2 * s**2 + 1 - 9 * s**3 * ls + 3 * ls


def _quarter_power_poly(x):
    return ppow(x, 1.25) - 3.0 * x + 4.0 * ppow(x, 0.75) - 5.0 * ppow(x, 0.25) + 3.0


def _third_power_core(t):
    return (t - 3.0) * ppow(0.5 * (t * t + 1.0), 2.0 / 3.0) + t + 1.0


def _dragomir_core(v, t):
    return 2.0 * t - ppow(t, v + 1.0) + v * (1.0 - v) * (t - 1.0) ** 2


def log_gap(t):
    """``2(t-1) - log t``; nonpositive on ``[c, 1]`` and zero at ``t = 1``."""
    t = sb.check_positive(t, "t")
    return sb._out(2.0 * (t - 1.0) - np.log(t))


def _log_gap_v(v, t):
    return 2.0 * (t - 1.0) - ((1.0 - v) * t + v) * np.log(t)


def _harm_upper_gap(v, t):
    return 2.0 - (ppow(t, v - 1.0) + 1.0) * ((1.0 - v) * t + v)


def _power_upper_gap(v, t):
    return v * (t - 1.0) * (ppow(t, v - 1.0) + 1.0) + 2.0 - 2.0 * ppow(t, v)


@dataclass(frozen=True)
class AuxFunctionEntry:
    """A named scalar function plus the claim it carries.

    ``region`` maps each parameter (in call order) to ``(lo, hi, spacing)``;
    ``hi`` may be ``inf``.  ``claim`` is ``"nonneg"``, ``"nonpos"`` or
    ``"nonincreasing"`` (along the last parameter).  Entries flagged
    ``observation`` record numerically observed ranges, not proven ones.
    """

    name: str
    func: Callable
    params: tuple[str, ...]
    region: dict
    claim: str
    formula: str
    observation: bool = False
    open_lo: frozenset = field(default_factory=frozenset)

    def __call__(self, **kw):
        missing = [p for p in self.params if p not in kw]
        if missing:
            raise ValueError(f"{self.name}: missing parameters {missing}")
        args = [np.asarray(kw[p], dtype=float) for p in self.params]
        return self.func(*args)


_INF = math.inf
_V01 = (0.0, 1.0, "lin")
_XGE1 = (1.0, _INF, "log")
_X01 = (0.0, 1.0, "log")
_CT1 = (C_VALUE, 1.0, "lin")


def _entry(name, func, params, region, claim, formula, observation=False, open_lo=()):
    return AuxFunctionEntry(name, func, tuple(params), dict(region), claim, formula,
                            observation, frozenset(open_lo))


CATALOG: dict[str, AuxFunctionEntry] = {
    e.name: e
    for e in [
        _entry("u_v", _u_v, ("v", "x"), {"v": (0.75, 1.0, "lin"), "x": _XGE1}, "nonneg",
               "v(x-1)(1-x^(v-1))/2 - min(v,1-v)(1-sqrt x)^2"),
        _entry("u_v_observed", _u_v, ("v", "x"), {"v": (0.7, 1.0, "lin"), "x": _XGE1}, "nonneg",
               "u_v on the wider weight range v >= 0.7", observation=True),
        _entry("w_v_high", _w_v, ("v", "x"), {"v": (2.0 / 3.0, 1.0, "lin"), "x": _XGE1}, "nonneg",
               "max(v,1-v)(1-sqrt x)^2 - v(x-1)(1-((x+1)/2)^(v-1))"),
        _entry("w_v_low", _w_v, ("v", "x"), {"v": (0.0, 1.0 / 3.0, "lin"), "x": _XGE1}, "nonneg",
               "w_v for small weights"),
        _entry("w_v_high_observed", _w_v, ("v", "x"), {"v": (0.6, 1.0, "lin"), "x": _XGE1},
               "nonneg", "w_v on v >= 0.6", observation=True),
        _entry("w_v_low_observed", _w_v, ("v", "x"), {"v": (0.0, 0.4, "lin"), "x": _XGE1},
               "nonneg", "w_v on v <= 0.4", observation=True),
        _entry("w_core", _w_core, ("v", "x"), {"v": (2.0 / 3.0, 1.0, "lin"), "x": _XGE1}, "nonneg",
               "(1-sqrt x)^2 - (x-1)(1-((x+1)/2)^(v-1))"),
        _entry("mM_gap", _mM_gap, ("v", "x"), {"v": _V01, "x": _X01}, "nonneg",
               "M_v(x) - m_v(x)", open_lo={"x"}),
        _entry("mM_gap_decreasing", _mM_gap, ("v", "x"), {"v": _V01, "x": _X01}, "nonincreasing",
               "M_v(x) - m_v(x) is nonincreasing in x", open_lo={"x"}),
        _entry("m_factor_decreasing", sb.m_factor, ("v", "x"), {"v": _V01, "x": _X01},
               "nonincreasing", "m_v(x) is nonincreasing in x", open_lo={"x"}),
        _entry("M_factor_decreasing", sb.M_factor, ("v", "x"), {"v": _V01, "x": _X01},
               "nonincreasing", "M_v(x) is nonincreasing in x", open_lo={"x"}),
        _entry("mM_gap_slope", _mM_gap_slope, ("v", "x"), {"v": _V01, "x": _X01}, "nonpos",
               "2x^2((1-v)x+v+3)(2x/(x+1))^v - ((1-v)x^3+(3-v)x^2+(v+3)x+v+1)",
               open_lo={"x"}),
        _entry("mM_gap_slope_bound", _mM_gap_slope_bound, ("v", "x"), {"v": _V01, "x": _X01},
               "nonpos", "(1-v)x^3 + 3(v+1)x^2 - (v+3)x - (v+1)", open_lo={"x"}),
        _entry("log_mean_bound", _log_mean_bound, ("x",), {"x": _XGE1}, "nonneg",
               "((x+1)/2)^(2/3) - (sqrt x + 1)/(2 sqrt x) (1 + log((x+1)/2))"),
        _entry("log_power_poly", _log_power_poly, ("s",), {"s": _XGE1}, "nonneg",
               "4s^5 - 3s^3 - 2s^2 + 1 - 9 s^3 log s + 3 log s"),
        _entry("quarter_power_poly", _quarter_power_poly, ("x",), {"x": _XGE1}, "nonneg",
               "x^(5/4) - 3x + 4x^(3/4) - 5x^(1/4) + 3"),
        _entry("third_power_core", _third_power_core, ("t",), {"t": _XGE1}, "nonneg",
               "(t-3)((t^2+1)/2)^(2/3) + t + 1"),
        _entry("dragomir_core", _dragomir_core, ("v", "t"), {"v": (0.0, 0.5, "lin"), "t": _XGE1},
               "nonneg", "2t - t^(v+1) + v(1-v)(t-1)^2"),
        _entry("log_gap", lambda t: 2.0 * (t - 1.0) - np.log(t), ("t",), {"t": _CT1}, "nonpos",
               "2(t-1) - log t"),
        _entry("log_gap_v", _log_gap_v, ("v", "t"), {"v": _V01, "t": _CT1}, "nonpos",
               "2(t-1) - ((1-v)t+v) log t"),
        _entry("harm_upper_gap", _harm_upper_gap, ("v", "t"), {"v": _V01, "t": _CT1}, "nonneg",
               "2 - (t^(v-1)+1)((1-v)t+v)"),
        _entry("power_upper_gap", _power_upper_gap, ("v", "t"), {"v": _V01, "t": _XGE1}, "nonneg",
               "v(t-1)(t^(v-1)+1) + 2 - 2t^v"),
    ]
}


def aux_names(include_observations=True) -> list[str]:
    return [n for n, e in CATALOG.items() if include_observations or not e.observation]


def _lookup(name) -> AuxFunctionEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}") from None


def aux_eval(name: str, **params) -> float | np.ndarray:
    """Evaluate catalog function ``name``; parameters must lie in its region."""
    entry = _lookup(name)
    for p in entry.params:
        if p not in params:
            raise ValueError(f"{name}: missing parameter {p!r}")
        lo, hi, _ = entry.region[p]
        val = np.asarray(params[p], dtype=float)
        low_bad = val <= lo if p in entry.open_lo else val < lo
        if np.any(low_bad) or np.any(val > hi) or not np.all(np.isfinite(val)):
            raise RegionError(f"{name}: {p}={params[p]} outside [{lo}, {hi}]")
    return sb._out(entry(**params))


def _axis(lo, hi, count, spacing):
    if spacing == "log":
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def default_grid(name: str, count: int = 200) -> dict:
    """Default ``{param: (lo, hi, count, spacing)}`` grid for an entry."""
    entry = _lookup(name)
    grid = {}
    for p in entry.params:
        lo, hi, spacing = entry.region[p]
        if math.isinf(hi):
            hi = X_CAP
        if p in entry.open_lo and lo <= 0.0:
            lo = X_FLOOR
        grid[p] = (lo, hi, count, spacing)
    return grid


@dataclass(frozen=True)
class SignReport:
    id: str
    attempted: int
    passed: int
    failed: int
    worst_margin: float
    witness: dict
    claim: str
    observation: bool

    @property
    def ok(self) -> bool:
        return self.failed == 0


def check_sign_region(name: str, grid_spec: dict | None = None, tol_rel: float = 1e-12) -> SignReport:
    """Check an entry's claim on a tensor grid inside its claim region.

    ``grid_spec`` maps each parameter to ``(lo, hi, count[, spacing])``.
    The reported margin is the claim-oriented value (``f`` for nonneg,
    ``-f`` for nonpos, ``-(f[i+1]-f[i])`` for nonincreasing) divided by
    ``1 + |f|``; the check passes when it is at least ``-tol_rel``.
    """
    entry = _lookup(name)
    spec = default_grid(name) if grid_spec is None else dict(grid_spec)
    axes = []
    for p in entry.params:
        if p not in spec:
            raise ValueError(f"{name}: grid missing parameter {p!r}")
        item = spec[p]
        lo, hi, count = float(item[0]), float(item[1]), int(item[2])
        spacing = item[3] if len(item) > 3 else entry.region[p][2]
        rlo, rhi, _ = entry.region[p]
        if count < 2 or not lo < hi:
            raise ValueError(f"{name}: bad grid for {p}: {item}")
        if lo < rlo or hi > rhi or (p in entry.open_lo and lo <= rlo):
            raise RegionError(f"{name}: grid for {p} [{lo}, {hi}] escapes claim region [{rlo}, {rhi}]")
        axes.append(_axis(lo, hi, count, spacing))
    mesh = np.meshgrid(*axes, indexing="ij")
    values = np.asarray(entry.func(*mesh), dtype=float)
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"{name}: non-finite values on grid")
    if entry.claim == "nonneg":
        margin = values / (1.0 + np.abs(values))
        points = mesh
    elif entry.claim == "nonpos":
        margin = -values / (1.0 + np.abs(values))
        points = mesh
    elif entry.claim == "nonincreasing":
        step = values[..., 1:] - values[..., :-1]
        margin = -step / (1.0 + np.abs(values[..., 1:]))
        points = [m[..., 1:] for m in mesh]
    else:  # pragma: no cover - catalog is static
        raise ValueError(entry.claim)
    flat = int(np.argmin(margin))
    idx = np.unravel_index(flat, margin.shape)
    witness = {p: float(points[k][idx]) for k, p in enumerate(entry.params)}
    witness["value"] = float(values[idx] if entry.claim != "nonincreasing" else values[..., 1:][idx])
    failed = int(np.count_nonzero(margin < -tol_rel))
    return SignReport(name, int(margin.size), int(margin.size) - failed, failed,
                      float(margin[idx]), witness, entry.claim, entry.observation)
