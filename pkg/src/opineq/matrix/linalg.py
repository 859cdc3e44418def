"""Symmetric eigendecomposition, functional calculus and the Loewner order.

Functions take arrays of shape ``(n, n)`` or stacks ``(..., n, n)`` and
operate on every matrix of a stack at once.
"""

from __future__ import annotations

import io
import math
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "MAX_DIM",
    "NotSPDError",
    "DimensionMismatchError",
    "SPDMatrix",
    "LoewnerResult",
    "symmetrize",
    "sym_eig",
    "jacobi_eig",
    "mat_fn",
    "mat_pow",
    "loewner_leq",
    "lambda_min",
    "format_matrix",
    "parse_matrices",
    "write_matrix",
    "read_matrix",
]

MAX_DIM = 32


class NotSPDError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


def symmetrize(X):
    X = np.asarray(X, dtype=float)
    return 0.5 * (X + np.swapaxes(X, -1, -2))


def _check_square(X, name="matrix"):
    X = np.asarray(X, dtype=float)
    if X.ndim < 2 or X.shape[-1] != X.shape[-2]:
        raise DimensionMismatchError(f"{name} must be square, got shape {X.shape}")
    return X


def _check_symmetric(X, rel=1e-12, name="matrix"):
    X = _check_square(X, name)
    scale = np.abs(X).max(axis=(-1, -2), initial=0.0)
    asym = np.abs(X - np.swapaxes(X, -1, -2)).max(axis=(-1, -2), initial=0.0)
    if np.any(asym > rel * np.maximum(scale, np.finfo(float).tiny)):
        raise ValueError(f"{name} is not symmetric (max |X - X^T| = {np.max(asym):.3g})")
    return X


def sym_eig(A, method: str = "lapack"):
    """Eigen-decomposition ``A = Q diag(lam) Q^T`` with ascending ``lam``.

    ``method="jacobi"`` runs the cyclic Jacobi iteration instead of LAPACK;
    it only handles single matrices.
    """
    A = _check_symmetric(A)
    if method == "lapack":
        lam, Q = np.linalg.eigh(symmetrize(A))
        return Q, lam
    if method == "jacobi":
        if A.ndim != 2:
            raise ValueError("jacobi method expects a single matrix")
        return jacobi_eig(A)
    raise ValueError(f"unknown method {method!r}")


def jacobi_eig(A, tol: float = 1e-12, max_sweeps: int = 60):
    """Cyclic Jacobi rotations until the off-diagonal Frobenius norm is
    at most ``tol * ||A||_F``.  Sweep order is row-major over ``p < q``.
    Returns ``(Q, lam)`` with ascending eigenvalues.
    """
    a = symmetrize(_check_square(A)).copy()
    n = a.shape[0]
    Q = np.eye(n)
    target = tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(2.0) * np.linalg.norm(np.triu(a, 1))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:  # theta**2 would overflow
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
                qp, qq = Q[:, p].copy(), Q[:, q].copy()
                Q[:, p], Q[:, q] = c * qp - s * qq, s * qp + c * qq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    return Q[:, order], lam[order]


def _apply_spectral(Q, lam, phi):
    vals = np.asarray(phi(lam), dtype=float)
    if vals.shape != lam.shape:
        vals = np.broadcast_to(vals, lam.shape)
    if not np.all(np.isfinite(vals)):
        bad = lam[~np.isfinite(vals)]
        raise ValueError(f"function undefined on eigenvalue {bad.ravel()[0]!r}")
    out = (Q * vals[..., None, :]) @ np.swapaxes(Q, -1, -2)
    return symmetrize(out)


def mat_fn(A, phi: Callable):
    """``Q phi(Lambda) Q^T`` for symmetric ``A`` (or an :class:`SPDMatrix`)."""
    if isinstance(A, SPDMatrix):
        return _apply_spectral(A.eigvecs, A.eigvals, phi)
    Q, lam = sym_eig(A)
    return _apply_spectral(Q, lam, phi)


def mat_pow(A, s):
    """Real power of an SPD matrix (stack); ``s`` broadcasts over the stack."""
    if isinstance(A, SPDMatrix):
        Q, lam = A.eigvecs, A.eigvals
    else:
        Q, lam = sym_eig(A)
    if np.any(lam <= 0.0):
        raise NotSPDError(f"matrix is not positive definite (lambda_min = {lam.min():.3g})")
    s = np.asarray(s, dtype=float)
    if s.ndim:
        s = s[..., None]
    return _apply_spectral(Q, lam, lambda w: np.exp(s * np.log(w)))


def lambda_min(X):
    return np.linalg.eigvalsh(symmetrize(X))[..., 0]


class LoewnerResult(NamedTuple):
    holds: bool | np.ndarray
    margin: float | np.ndarray
    scale: float | np.ndarray


def loewner_leq(X, Y, tol: float = 1e-8) -> LoewnerResult:
    """Test ``X <= Y`` in the Loewner order.

    ``margin`` is ``lambda_min(Y - X)``; the test passes when
    ``margin >= -tol * (1 + ||Y - X||_2)``.  ``scale`` is that
    ``1 + ||Y - X||_2`` factor.
    """
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    if X.shape[-2:] != Y.shape[-2:]:
        raise DimensionMismatchError(f"shapes {X.shape} and {Y.shape} differ")
    lam = np.linalg.eigvalsh(symmetrize(Y - X))
    margin = lam[..., 0]
    scale = 1.0 + np.maximum(np.abs(lam[..., 0]), np.abs(lam[..., -1]))
    holds = margin >= -tol * scale
    if np.ndim(margin) == 0:
        return LoewnerResult(bool(holds), float(margin), float(scale))
    return LoewnerResult(holds, margin, scale)


class SPDMatrix:
    """Immutable symmetric positive-definite matrix with its eigensystem.

    The decomposition is computed once at construction; ``eigvals`` are
    ascending and ``eigvecs`` orthonormal.
    """

    __slots__ = ("_data", "_Q", "_lam")

    def __init__(self, data, *, sym_tol: float = 1e-12, method: str = "lapack"):
        A = _check_square(np.array(data, dtype=float), "SPD matrix")
        if A.ndim != 2:
            raise DimensionMismatchError("SPDMatrix holds a single matrix")
        if A.shape[0] > MAX_DIM:
            raise DimensionMismatchError(f"dimension {A.shape[0]} exceeds {MAX_DIM}")
        _check_symmetric(A, sym_tol, "SPD matrix")
        A = symmetrize(A)
        Q, lam = sym_eig(A, method)
        if not np.all(np.isfinite(lam)) or lam[0] <= 0.0:
            raise NotSPDError(f"matrix is not positive definite (lambda_min = {lam[0]:.6g})")
        for arr in (A, Q, lam):
            arr.flags.writeable = False
        self._data, self._Q, self._lam = A, Q, lam

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def eigvals(self) -> np.ndarray:
        return self._lam

    @property
    def eigvecs(self) -> np.ndarray:
        return self._Q

    @property
    def n(self) -> int:
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        out = self._data if dtype is None else self._data.astype(dtype)
        return out.copy() if copy else out

    def __repr__(self):
        return f"SPDMatrix(n={self.n}, eigvals={np.array2string(self._lam, precision=4)})"

    def apply(self, phi: Callable) -> np.ndarray:
        return mat_fn(self, phi)

    def power(self, s: float) -> np.ndarray:
        return mat_pow(self, s)

    def sqrt(self) -> np.ndarray:
        return self.power(0.5)

    def inv(self) -> np.ndarray:
        return self.power(-1.0)


# --------------------------------------------------------------------------
# plain-text matrix format: a header line holding n, then n rows of
# whitespace-separated decimals (17 significant digits on output)


def format_matrix(A) -> str:
    A = _check_square(A)
    if A.ndim != 2:
        raise ValueError("format_matrix expects a single matrix")
    lines = [str(A.shape[0])]
    lines += [" ".join(f"{x:.17g}" for x in row) for row in A]
    return "\n".join(lines) + "\n"


def parse_matrices(text: str) -> list[np.ndarray]:
    """Parse every matrix block in ``text``; lines starting with ``#`` are skipped."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    out, i = [], 0
    while i < len(rows):
        if len(rows[i]) != 1:
            raise ValueError(f"expected a dimension header, got {' '.join(rows[i])!r}")
        n = int(rows[i][0])
        block = rows[i + 1:i + 1 + n]
        if len(block) != n or any(len(r) != n for r in block):
            raise ValueError(f"malformed {n}x{n} matrix block")
        out.append(np.array([[float(x) for x in r] for r in block]))
        i += 1 + n
    return out


def write_matrix(path_or_file, A) -> None:
    text = format_matrix(np.asarray(A, dtype=float))
    if isinstance(path_or_file, io.TextIOBase):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", newline="\n") as fh:
            fh.write(text)


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        mats = parse_matrices(fh.read())
    if len(mats) != 1:
        raise ValueError(f"expected one matrix in {path}, found {len(mats)}")
    return mats[0]
