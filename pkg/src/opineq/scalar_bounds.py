"""Closed-form scalar means and the bound factors built on them.

Every function accepts Python floats or numpy arrays and broadcasts over
its arguments; a 0-d result is returned as a plain ``float``.  Positive
arguments are validated up front, weights must lie in ``[0, 1]``.

Powers ``x**s`` of a positive base are always computed as
``exp(s * log(x))`` so that margins stay consistent between operations.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "KMWeights",
    "check_weight",
    "check_positive",
    "ppow",
    "kantorovich",
    "m_factor",
    "M_factor",
    "mean_arith",
    "mean_geom",
    "mean_harm",
    "mean_heinz",
    "mean_heron",
    "heron_normalized",
    "km_gap",
    "g_norm",
    "G_norm",
    "g_pair",
    "G_pair",
    "harm_norm",
    "dragomir_factor",
    "km_weights",
]

# Exponent offset inside m_factor's 2**(v + shift) constant.  Only the
# negative-control hook in ``opineq.testing`` ever changes it.
_M_FACTOR_SHIFT = 0.0


class KMWeights(NamedTuple):
    r_min: float
    R_max: float


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def check_weight(v, name="v"):
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)) or np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return v


def check_positive(x, name="x"):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise ValueError(f"{name} must be positive and finite, got {x}")
    return x


def _check_real(r, name="r"):
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise ValueError(f"{name} must be finite, got {r}")
    return r


def ppow(x, s):
    """``x**s`` for positive ``x`` via ``exp(s*log(x))``."""
    return np.exp(np.asarray(s, dtype=float) * np.log(x))


def kantorovich(x):
    """Kantorovich constant ``(x+1)**2 / (4x)``; symmetric under x -> 1/x."""
    x = check_positive(x)
    return _out((x + 1.0) ** 2 / (4.0 * x))


def m_factor(v, x):
    """Lower multiplicative factor ``1 + 2^v v(1-v)(x-1)^2/(x+1)^(v+1)``.

    At least 1 and nonincreasing on ``0 < x <= 1``; equal to 1 at ``x = 1``.
    """
    v = check_weight(v)
    x = check_positive(x)
    two_v = ppow(2.0, v + _M_FACTOR_SHIFT)
    return _out(1.0 + two_v * v * (1.0 - v) * (x - 1.0) ** 2 / ppow(x + 1.0, v + 1.0))


def M_factor(v, x):
    """Upper multiplicative factor ``1 + v(1-v)(x-1)^2 / (2 x^(v+1))``."""
    v = check_weight(v)
    x = check_positive(x)
    return _out(1.0 + v * (1.0 - v) * (x - 1.0) ** 2 / (2.0 * ppow(x, v + 1.0)))


def mean_arith(v, a, b):
    v = check_weight(v)
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return _out((1.0 - v) * a + v * b)


def mean_geom(v, a, b):
    v = check_weight(v)
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return _out(ppow(a, 1.0 - v) * ppow(b, v))


def mean_harm(v, a, b):
    v = check_weight(v)
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return _out(1.0 / ((1.0 - v) / a + v / b))


def mean_heinz(v, a, b):
    v = check_weight(v)
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return _out(0.5 * (ppow(a, 1.0 - v) * ppow(b, v) + ppow(a, v) * ppow(b, 1.0 - v)))


def mean_heron(r, v, a, b):
    """Heron-type mean ``r*geom + (1-r)*arith``; ``r`` may be any real."""
    r = _check_real(r)
    v = check_weight(v)
    a, b = check_positive(a, "a"), check_positive(b, "b")
    geom = ppow(a, 1.0 - v) * ppow(b, v)
    arith = (1.0 - v) * a + v * b
    return _out(r * geom + (1.0 - r) * arith)


def heron_normalized(r, v, x):
    """Heron mean of ``(1, x)``: ``r x^v + (1-r)((1-v) + v x)``."""
    r = _check_real(r)
    v = check_weight(v)
    x = check_positive(x)
    return _out(r * ppow(x, v) + (1.0 - r) * ((1.0 - v) + v * x))


def km_gap(a, b):
    """``(sqrt(a) - sqrt(b))**2``, the gap between the two unweighted means."""
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return _out((np.sqrt(a) - np.sqrt(b)) ** 2)


def g_norm(r, v, x):
    """Midpoint-type bound ``v(x-1){r((1+x)/2)^(v-1) + (1-r)} + 1``."""
    r = _check_real(r)
    v = check_weight(v)
    x = check_positive(x)
    return _out(v * (x - 1.0) * (r * ppow(0.5 * (1.0 + x), v - 1.0) + (1.0 - r)) + 1.0)


def G_norm(r, v, x):
    """Endpoint-type bound ``(v(x-1)/2)(r x^(v-1) + 2 - r) + 1``."""
    r = _check_real(r)
    v = check_weight(v)
    x = check_positive(x)
    return _out(0.5 * v * (x - 1.0) * (r * ppow(x, v - 1.0) + 2.0 - r) + 1.0)


def g_pair(r, v, a, b):
    """``g_norm`` at ``x = b/a``.

    The result is dimensionless: compare it with ``mean_heron(r, v, a, b) / a``,
    not with the un-normalized Heron mean.
    """
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return g_norm(r, v, b / a)


def G_pair(r, v, a, b):
    """``G_norm`` at ``x = b/a``; see :func:`g_pair` for the normalization."""
    a, b = check_positive(a, "a"), check_positive(b, "b")
    return G_norm(r, v, b / a)


def harm_norm(v, t):
    """Weighted harmonic mean of 1 and ``t``: ``((1-v) + v/t)**-1``."""
    v = check_weight(v)
    t = check_positive(t, "t")
    return _out(1.0 / ((1.0 - v) + v / t))


def dragomir_factor(v, x):
    """``exp(4v(1-v)(K(x) - 1))`` with ``K`` the Kantorovich constant."""
    v = check_weight(v)
    x = check_positive(x)
    return _out(np.exp(4.0 * v * (1.0 - v) * ((x + 1.0) ** 2 / (4.0 * x) - 1.0)))


def km_weights(v) -> KMWeights:
    v = float(check_weight(v))
    return KMWeights(min(v, 1.0 - v), max(v, 1.0 - v))
