"""Seeded random SPD instances satisfying each hypothesis by construction.

Orthogonal bases are products of ``n(n-1)/2`` plane rotations with
uniform angles, applied in row-major ``(p, q)`` order.  Batch generators
take a ``(trials, draws)`` block of uniforms, one row per trial stream;
``draws_*`` report how many uniforms a generator consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..matrix.linalg import MAX_DIM, mat_pow, symmetrize
from .rng import derive_seed, trial_seeds, uniform_block

__all__ = [
    "TrialConfig",
    "n_angles",
    "random_orthogonal",
    "spectrum",
    "spd_from",
    "draws_ordered",
    "draws_sandwich",
    "draws_ratio",
    "draws_free",
    "ordered_pairs",
    "sandwich_pairs",
    "ratio_pairs",
    "free_pairs",
    "gen_ordered_pair",
    "gen_sandwich_pair",
    "gen_ratio_pair",
]


@dataclass(frozen=True)
class TrialConfig:
    """Everything a verification run depends on; equal configs give equal reports.

    ``tol=None`` picks the per-kind default (1e-8 for Loewner checks,
    1e-12 for scalar chains).  Scalar cases draw ``scalar_samples``
    points, or ``max(samples, 100000)`` when that is unset.
    """

    seed: int = 42
    samples: int = 500
    dim: int = 4
    tol: float | None = None
    v_range: tuple[float, float] = (0.0, 1.0)
    r_range: tuple[float, float] = (-4.0, 4.0)
    eig_range: tuple[float, float] = (0.1, 10.0)
    level_range: tuple[float, float] = (math.exp(-2.0), math.exp(2.0))
    boundary_rate: float = 0.05
    scalar_samples: int | None = None

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or not 2 <= self.dim <= MAX_DIM:
            raise ValueError(f"dim must be an integer in [2, {MAX_DIM}], got {self.dim}")
        if self.samples < 0 or (self.scalar_samples or 0) < 0:
            raise ValueError("samples must be nonnegative")
        if self.tol is not None and not self.tol >= 0:
            raise ValueError("tol must be nonnegative")
        lo, hi = self.v_range
        if not 0.0 <= lo <= hi <= 1.0:
            raise ValueError(f"v_range must lie in [0, 1], got {self.v_range}")
        if not 0.0 < self.eig_range[0] <= self.eig_range[1]:
            raise ValueError("eig_range must be positive and ordered")
        if not 0.0 < self.level_range[0] < self.level_range[1]:
            raise ValueError("level_range must be positive and ordered")
        if not 0.0 <= self.boundary_rate <= 1.0:
            raise ValueError("boundary_rate must lie in [0, 1]")

    @property
    def scalar_count(self) -> int:
        if self.scalar_samples is not None:
            return self.scalar_samples
        return max(self.samples, 100_000) if self.samples else 0

    def with_dim(self, dim: int) -> "TrialConfig":
        return replace(self, dim=dim)


def n_angles(n: int) -> int:
    return n * (n - 1) // 2


def _log_uniform(u, lo, hi):
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    return np.exp(np.log(lo) + u * (np.log(hi) - np.log(lo)))


def random_orthogonal(u: np.ndarray, n: int) -> np.ndarray:
    """Orthogonal matrices from ``(trials, n(n-1)/2)`` uniforms."""
    u = np.atleast_2d(u)
    trials = u.shape[0]
    Q = np.broadcast_to(np.eye(n), (trials, n, n)).copy()
    theta = 2.0 * math.pi * u
    k = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            c, s = np.cos(theta[:, k])[:, None], np.sin(theta[:, k])[:, None]
            qp, qq = Q[:, :, p].copy(), Q[:, :, q]
            Q[:, :, p] = c * qp - s * qq
            Q[:, :, q] = s * qp + c * qq
            k += 1
    return Q


def spectrum(u: np.ndarray, lo, hi, pin: bool = True) -> np.ndarray:
    """Log-uniform eigenvalues in ``[lo, hi]`` (per trial); with ``pin`` the
    first two are set to the endpoints so both extremes are attained."""
    u = np.atleast_2d(u)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (u.shape[0],))[:, None]
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (u.shape[0],))[:, None]
    lam = _log_uniform(u, lo, hi)
    if pin and u.shape[1] >= 2:
        lam[:, 0] = lo[:, 0]
        lam[:, 1] = hi[:, 0]
    return lam


def spd_from(lam: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """``Q diag(lam) Q^T``; rows with a constant spectrum become exact ``c I``."""
    M = symmetrize((Q * lam[:, None, :]) @ np.swapaxes(Q, -1, -2))
    flat = np.all(lam == lam[:, :1], axis=1)
    if np.any(flat):
        n = lam.shape[1]
        M[flat] = lam[flat, :1, None] * np.eye(n)
    return M


def _split(u, sizes):
    out, k = [], 0
    for s in sizes:
        out.append(u[:, k:k + s])
        k += s
    return out


def draws_ordered(n: int) -> int:
    return 3 * n + 2 * n_angles(n) + 1


def ordered_pairs(u, n, cfg: TrialConfig, force_equal=None):
    """Pairs ``A <= B``: ``B = A + P diag(d) P^T`` with ``d >= 0``.

    About a quarter of the entries of ``d`` are zeroed so that ``B - A`` is
    often singular; a trial is a boundary case ``A = B`` when its boundary
    draw falls below ``cfg.boundary_rate`` or ``force_equal`` is set.
    """
    P = n_angles(n)
    ua, qa, ud, umask, qp, ub = _split(np.atleast_2d(u), [n, P, n, n, P, 1])
    lo, hi = cfg.eig_range
    A = spd_from(spectrum(ua, lo, hi, pin=False), random_orthogonal(qa, n))
    d = 3.0 * ud * (umask >= 0.25)
    equal = ub[:, 0] < cfg.boundary_rate
    if force_equal is not None:
        equal = equal | np.broadcast_to(np.asarray(force_equal, dtype=bool), equal.shape)
    d[equal] = 0.0
    Pm = random_orthogonal(qp, n)
    B = symmetrize(A + (Pm * d[:, None, :]) @ np.swapaxes(Pm, -1, -2))
    B[equal] = A[equal]
    return A, B


def draws_sandwich(n: int) -> int:
    return 2 * n + 2 * n_angles(n)


def _check_levels(alpha_p, alpha, beta, beta_p):
    lv = [np.asarray(x, dtype=float) for x in (alpha_p, alpha, beta, beta_p)]
    ok = (lv[0] > 0) & (lv[0] <= lv[1]) & (lv[1] <= lv[2]) & (lv[2] <= lv[3])
    if not np.all(ok):
        raise ValueError("need 0 < alpha' <= alpha <= beta <= beta'")
    return lv


def sandwich_pairs(u, n, alpha_p, alpha, beta, beta_p):
    """Pairs with ``alpha' I <= B <= alpha I <= beta I <= A <= beta' I``;
    each spectrum attains both ends of its band."""
    alpha_p, alpha, beta, beta_p = _check_levels(alpha_p, alpha, beta, beta_p)
    P = n_angles(n)
    ub, qb, ua, qa = _split(np.atleast_2d(u), [n, P, n, P])
    B = spd_from(spectrum(ub, alpha_p, alpha), random_orthogonal(qb, n))
    A = spd_from(spectrum(ua, beta, beta_p), random_orthogonal(qa, n))
    return A, B


def draws_ratio(n: int) -> int:
    return 2 * n + 2 * n_angles(n)


def ratio_pairs(u, n, cfg: TrialConfig, lo, hi):
    """Pairs with ``spec(A^{-1/2} B A^{-1/2})`` inside ``[lo, hi]``, both ends attained."""
    P = n_angles(n)
    ua, qa, ux, qx = _split(np.atleast_2d(u), [n, P, n, P])
    A = spd_from(spectrum(ua, *cfg.eig_range, pin=False), random_orthogonal(qa, n))
    X = spd_from(spectrum(ux, lo, hi), random_orthogonal(qx, n))
    root = mat_pow(A, 0.5)
    B = symmetrize(root @ X @ root)
    return A, B


def draws_free(n: int) -> int:
    return 2 * n + 2 * n_angles(n)


def free_pairs(u, n, cfg: TrialConfig):
    P = n_angles(n)
    ua, qa, ub, qb = _split(np.atleast_2d(u), [n, P, n, P])
    lo, hi = cfg.eig_range
    A = spd_from(spectrum(ua, lo, hi, pin=False), random_orthogonal(qa, n))
    B = spd_from(spectrum(ub, lo, hi, pin=False), random_orthogonal(qb, n))
    return A, B


def _single_block(cfg: TrialConfig, label: str, trial: int, draws: int):
    base = derive_seed(cfg.seed, label, cfg.dim)
    return uniform_block(trial_seeds(base, trial, 1), draws)


def gen_ordered_pair(cfg: TrialConfig, trial: int = 0, force_equal: bool = False):
    """One pair ``0 < A <= B`` drawn from trial ``trial`` of ``cfg``'s stream."""
    u = _single_block(cfg, "ordered", trial, draws_ordered(cfg.dim))
    A, B = ordered_pairs(u, cfg.dim, cfg, force_equal=force_equal)
    return A[0], B[0]


def gen_sandwich_pair(cfg: TrialConfig, alpha_p, alpha, beta, beta_p, trial: int = 0):
    """One pair with ``alpha' I <= B <= alpha I <= beta I <= A <= beta' I``."""
    _check_levels(alpha_p, alpha, beta, beta_p)
    u = _single_block(cfg, "sandwich", trial, draws_sandwich(cfg.dim))
    A, B = sandwich_pairs(u, cfg.dim, alpha_p, alpha, beta, beta_p)
    return A[0], B[0]


def gen_ratio_pair(cfg: TrialConfig, lo: float, hi: float, trial: int = 0):
    """One pair whose ratio spectrum spans exactly ``[lo, hi]``."""
    if not 0.0 < lo <= hi:
        raise ValueError("need 0 < lo <= hi")
    u = _single_block(cfg, "ratio", trial, draws_ratio(cfg.dim))
    A, B = ratio_pairs(u, cfg.dim, cfg, lo, hi)
    return A[0], B[0]
