"""Per-step linear solves for ``(d M + beta S) U = rhs``.

The mass matrix only couples indices ``j`` and ``j + 2`` and the stiffness
matrix is diagonal, so the system splits into an even-index and an odd-index
tridiagonal block. Each block is factored as ``L D L^T`` without pivoting,
which is safe while both blocks are positive definite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "BandedSymMatrix",
    "IndefiniteSystemError",
    "ParitySplitSystem",
    "factor",
    "solve",
    "dense_solve",
]


class IndefiniteSystemError(np.linalg.LinAlgError):
    """A non-positive pivot appeared; the coefficients do not give an SPD system."""


@dataclass(frozen=True)
class BandedSymMatrix:
    """Symmetric matrix with nonzeros on the main and second off-diagonals only."""

    diag: np.ndarray
    off2: np.ndarray

    def __post_init__(self):
        diag = np.ascontiguousarray(self.diag, dtype=float)
        off2 = np.ascontiguousarray(self.off2, dtype=float)
        if off2.shape[0] != max(diag.shape[0] - 2, 0):
            raise ValueError("off2 must have length dim - 2")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off2", off2)

    @property
    def dim(self) -> int:
        return self.diag.shape[0]

    @classmethod
    def from_dense(cls, A, tol=0.0):
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        band = np.zeros_like(A)
        idx = np.arange(n)
        band[idx, idx] = A[idx, idx]
        band[idx[:-2], idx[:-2] + 2] = A[idx[:-2], idx[:-2] + 2]
        band[idx[:-2] + 2, idx[:-2]] = A[idx[:-2], idx[:-2] + 2]
        if np.max(np.abs(A - band), initial=0.0) > tol:
            raise ValueError("matrix has entries outside the (0, +-2) band")
        return cls(np.diag(A).copy(), np.diag(A, 2).copy())

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-2] += self.off2 * x[2:]
        y[2:] += self.off2 * x[:-2]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off2, 2) + np.diag(self.off2, -2)


@dataclass(frozen=True)
class _Block:
    index: np.ndarray
    pivots: np.ndarray
    lower: np.ndarray


@dataclass(frozen=True)
class ParitySplitSystem:
    """``L D L^T`` factors of the even and odd blocks of ``d M + beta S``."""

    dim: int
    d: float
    beta: float
    blocks: tuple

    def reconstruct(self) -> np.ndarray:
        """Dense matrix rebuilt from the factors (used by tests)."""
        A = np.zeros((self.dim, self.dim))
        for blk in self.blocks:
            m = blk.index.shape[0]
            L = np.eye(m) + np.diag(blk.lower, -1)
            A[np.ix_(blk.index, blk.index)] = L @ np.diag(blk.pivots) @ L.T
        return A


def factor(d: float, beta: float, M: BandedSymMatrix, S) -> ParitySplitSystem:
    """Factor ``d M + beta S`` where ``S`` is given by its diagonal."""
    S = np.asarray(S, dtype=float)
    if S.ndim == 2:
        S = np.diag(S)
    n = M.dim
    if S.shape[0] != n:
        raise ValueError("mass and stiffness dimensions differ")
    blocks = []
    for parity in (0, 1):
        idx = np.arange(parity, n, 2)
        m = idx.shape[0]
        diag = d * M.diag[idx] + beta * S[idx]
        off = d * M.off2[idx[:-1]] if m > 1 else np.empty(0)
        pivots = np.empty(m)
        lower = np.empty(max(m - 1, 0))
        bad = kernels.ldl_factor(np.ascontiguousarray(diag), np.ascontiguousarray(off), pivots, lower)
        if bad >= 0:
            raise IndefiniteSystemError(
                f"non-positive pivot at row {idx[bad]} (d={d}, beta={beta})"
            )
        blocks.append(_Block(idx, pivots, lower))
    return ParitySplitSystem(n, d, beta, tuple(blocks))


def solve(system: ParitySplitSystem, rhs) -> np.ndarray:
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (system.dim,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({system.dim},)")
    x = np.empty(system.dim)
    for blk in system.blocks:
        out = np.empty(blk.index.shape[0])
        kernels.ldl_solve(blk.pivots, blk.lower, np.ascontiguousarray(rhs[blk.index]), out)
        x[blk.index] = out
    return x


def dense_solve(A, rhs) -> np.ndarray:
    """Dense LU with partial pivoting; the reference the banded path is checked against."""
    return np.linalg.solve(np.asarray(A, dtype=float), np.asarray(rhs, dtype=float))
