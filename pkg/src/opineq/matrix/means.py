"""Weighted operator means of SPD matrices.

All means accept single matrices or stacks ``(..., n, n)``; the weight
may be a scalar or an array matching the stack shape.  Results are
symmetrized before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..scalar_bounds import check_weight
from .linalg import (
    DimensionMismatchError,
    NotSPDError,
    SPDMatrix,
    _apply_spectral,
    sym_eig,
    symmetrize,
)

__all__ = [
    "NATURAL_EXPONENT_LIMIT",
    "SandwichBounds",
    "mean_nabla",
    "mean_sharp",
    "mean_bang",
    "mean_natural",
    "mean_heinz",
    "mean_heron_op",
    "congruence_parts",
    "sandwich_extract",
    "spd_inverse",
]

NATURAL_EXPONENT_LIMIT = 4.0


def _as_array(X):
    return X.data if isinstance(X, SPDMatrix) else np.asarray(X, dtype=float)


def _pair(A, B, check=True):
    A, B = _as_array(A), _as_array(B)
    if A.shape[-1] != A.shape[-2] or A.shape != B.shape:
        raise DimensionMismatchError(f"operands have shapes {A.shape} and {B.shape}")
    return A, B


def _expand(w, X):
    """Reshape a per-matrix scalar so it broadcasts against stack ``X``."""
    w = np.asarray(w, dtype=float)
    return w[..., None, None] if w.ndim else w


def _eig_spd(A, name="A"):
    Q, lam = sym_eig(A)
    if np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
        raise NotSPDError(f"{name} is not positive definite (lambda_min = {np.min(lam):.6g})")
    return Q, lam


def _pow_from(Q, lam, s):
    s = np.asarray(s, dtype=float)
    if s.ndim:
        s = s[..., None]
    return _apply_spectral(Q, lam, lambda w: np.exp(s * np.log(w)))


def spd_inverse(A):
    Q, lam = _eig_spd(_as_array(A))
    return _pow_from(Q, lam, -1.0)


def congruence_parts(A, B):
    """``(A^{1/2}, A^{-1/2}, X)`` with ``X = A^{-1/2} B A^{-1/2}``."""
    A, B = _pair(A, B)
    Q, lam = _eig_spd(A)
    _eig_spd(B, "B")
    root = _pow_from(Q, lam, 0.5)
    iroot = _pow_from(Q, lam, -0.5)
    X = symmetrize(iroot @ B @ iroot)
    return root, iroot, X


def mean_nabla(v, A, B):
    """Weighted arithmetic mean ``(1-v)A + vB``."""
    A, B = _pair(A, B)
    v = _expand(check_weight(v), A)
    _eig_spd(A)
    _eig_spd(B, "B")
    return symmetrize((1.0 - v) * A + v * B)


def mean_natural(t, A, B):
    """``A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`` for real ``|t| <= 4``."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(np.abs(t) > NATURAL_EXPONENT_LIMIT):
        raise ValueError(f"exponent must satisfy |t| <= {NATURAL_EXPONENT_LIMIT}, got {t}")
    root, _, X = congruence_parts(A, B)
    Qx, lx = _eig_spd(X, "A^{-1/2} B A^{-1/2}")
    return symmetrize(root @ _pow_from(Qx, lx, t) @ root)


def mean_sharp(v, A, B):
    """Weighted geometric mean ``A #_v B``."""
    return mean_natural(check_weight(v), A, B)


def mean_bang(v, A, B):
    """Weighted harmonic mean ``((1-v)A^{-1} + vB^{-1})^{-1}``."""
    A, B = _pair(A, B)
    v = _expand(check_weight(v), A)
    S = (1.0 - v) * spd_inverse(A) + v * spd_inverse(B)
    return spd_inverse(symmetrize(S))


def mean_heinz(v, A, B):
    """Heinz mean ``(A #_v B + A #_{1-v} B) / 2``."""
    v = check_weight(v)
    root, _, X = congruence_parts(A, B)
    Qx, lx = _eig_spd(X)
    inner = 0.5 * (_pow_from(Qx, lx, v) + _pow_from(Qx, lx, 1.0 - v))
    return symmetrize(root @ inner @ root)


def mean_heron_op(r, v, A, B):
    """Operator Heron mean, lifted as ``r (A #_v B) + (1-r)(A nabla_v B)``."""
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise ValueError("r must be finite")
    S = mean_sharp(v, A, B)
    N = mean_nabla(v, A, B)
    r = _expand(r, S)
    return symmetrize(r * S + (1.0 - r) * N)


@dataclass(frozen=True)
class SandwichBounds:
    """Spectral ratios ``h' <= spec(A^{-1/2} B A^{-1/2}) <= h``.

    When built from levels ``alpha' <= alpha <= beta <= beta'`` (spectrum
    of B in ``[alpha', alpha]``, of A in ``[beta, beta']``) the ratios are
    ``h = alpha/beta`` and ``h' = alpha'/beta'``.
    """

    h_p: float
    h: float
    alpha_p: float | None = None
    alpha: float | None = None
    beta: float | None = None
    beta_p: float | None = None

    @classmethod
    def from_levels(cls, alpha_p, alpha, beta, beta_p) -> "SandwichBounds":
        levels = [float(x) for x in (alpha_p, alpha, beta, beta_p)]
        if not levels[0] > 0 or any(a > b for a, b in zip(levels, levels[1:])):
            raise ValueError(f"need 0 < alpha' <= alpha <= beta <= beta', got {levels}")
        a_p, a, b, b_p = levels
        return cls(a_p / b_p, a / b, a_p, a, b, b_p)

    @property
    def satisfied_theorem_b(self) -> bool:
        return self.h <= 1.0 + 1e-12


def sandwich_extract(A, B) -> SandwichBounds:
    """Extreme eigenvalues of ``A^{-1/2} B A^{-1/2}`` as ``(h', h)``."""
    A, B = _pair(A, B)
    if A.ndim != 2:
        raise ValueError("sandwich_extract expects single matrices")
    _, _, X = congruence_parts(A, B)
    lam = np.linalg.eigvalsh(X)
    return SandwichBounds(float(lam[0]), float(lam[-1]))
