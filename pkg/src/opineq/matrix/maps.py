"""Normalized (unital) positive linear maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimensionMismatchError, symmetrize

__all__ = ["PositiveLinearMap", "phi_apply"]

_KINDS = ("normalized_trace", "pinching", "compression")


@dataclass(frozen=True, eq=False)
class PositiveLinearMap:
    """A unital positive map on ``n x n`` symmetric matrices.

    kind ``normalized_trace``: ``X -> (tr X / n) I``.
    kind ``pinching``: keep the diagonal blocks given by ``blocks`` (a
    partition of ``range(n)``), zero everything else.
    kind ``compression``: ``X -> V^T X V`` for an isometry ``V`` (``n x k``,
    or a stack of them matching a stack of inputs).
    """

    kind: str
    n: int
    blocks: tuple = ()
    V: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.kind == "pinching":
            flat = sorted(i for b in self.blocks for i in b)
            if flat != list(range(self.n)) or any(len(b) == 0 for b in self.blocks):
                raise ValueError(f"blocks {self.blocks} do not partition range({self.n})")
        if self.kind == "compression":
            if self.V is None:
                raise ValueError("compression needs an isometry V")
            V = np.asarray(self.V, dtype=float)
            if V.shape[-2] != self.n or V.shape[-1] > self.n:
                raise ValueError(f"isometry must be {self.n} x k with k <= {self.n}")
            gram = np.swapaxes(V, -1, -2) @ V
            if np.abs(gram - np.eye(V.shape[-1])).max() > 1e-10:
                raise ValueError("V does not have orthonormal columns")
            object.__setattr__(self, "V", V)

    @classmethod
    def normalized_trace(cls, n):
        return cls("normalized_trace", n)

    @classmethod
    def pinching(cls, blocks):
        blocks = tuple(tuple(int(i) for i in b) for b in blocks)
        return cls("pinching", sum(len(b) for b in blocks), blocks)

    @classmethod
    def compression(cls, V):
        V = np.asarray(V, dtype=float)
        return cls("compression", V.shape[-2], (), V)

    @property
    def out_dim(self) -> int:
        return self.V.shape[-1] if self.kind == "compression" else self.n

    def __call__(self, X):
        return phi_apply(self, X)


def phi_apply(phi: PositiveLinearMap, X):
    X = np.asarray(X, dtype=float)
    if X.shape[-2:] != (phi.n, phi.n):
        raise DimensionMismatchError(f"map acts on {phi.n}x{phi.n}, got {X.shape}")
    if phi.kind == "normalized_trace":
        tr = np.trace(X, axis1=-2, axis2=-1) / phi.n
        return np.asarray(tr)[..., None, None] * np.eye(phi.n)
    if phi.kind == "pinching":
        mask = np.zeros((phi.n, phi.n), dtype=bool)
        for b in phi.blocks:
            mask[np.ix_(b, b)] = True
        return np.where(mask, X, 0.0)
    return symmetrize(np.swapaxes(phi.V, -1, -2) @ X @ phi.V)
