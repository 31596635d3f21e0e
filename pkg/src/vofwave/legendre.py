"""Legendre polynomials, the boundary-adapted basis and Gauss-Legendre rules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = [
    "Basis",
    "QuadratureRule",
    "legendre_eval_upto",
    "legendre_deriv_upto",
    "chi_eval",
    "chi_deriv",
    "gauss_rule",
]


def legendre_eval_upto(n: int, xhat) -> np.ndarray:
    """Values ``L_0..L_n`` at ``xhat``; the last axis indexes the degree."""
    x = np.asarray(xhat, dtype=float)
    out = np.empty(x.shape + (n + 1,))
    out[..., 0] = 1.0
    if n >= 1:
        out[..., 1] = x
    for r in range(1, n):
        out[..., r + 1] = ((2 * r + 1) * x * out[..., r] - r * out[..., r - 1]) / (r + 1)
    return out


def legendre_deriv_upto(n: int, xhat) -> np.ndarray:
    """Derivatives ``L_0'..L_n'`` via ``L_{r+1}' = L_{r-1}' + (2r+1) L_r``."""
    L = legendre_eval_upto(n, xhat)
    out = np.zeros_like(L)
    if n >= 1:
        out[..., 1] = 1.0
    for r in range(1, n):
        out[..., r + 1] = out[..., r - 1] + (2 * r + 1) * L[..., r]
    return out


@dataclass(frozen=True)
class Basis:
    """``chi_r(x) = L_r(xh) - L_{r+2}(xh)``, r = 0..N-2, on ``[a, b]``."""

    N: int
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("spectral truncation N must be >= 2")
        if not self.b > self.a:
            raise ValueError("domain requires b > a")

    @property
    def dim(self) -> int:
        return self.N - 1

    @property
    def jacobian(self) -> float:
        """``dxhat/dx``."""
        return 2.0 / (self.b - self.a)

    def to_ref(self, x):
        return (2.0 * np.asarray(x, dtype=float) - self.b - self.a) / (self.b - self.a)

    def values(self, x) -> np.ndarray:
        """All basis functions at ``x``; shape ``x.shape + (dim,)``."""
        L = legendre_eval_upto(self.N, self.to_ref(x))
        return L[..., : self.N - 1] - L[..., 2 : self.N + 1]

    def derivatives(self, x) -> np.ndarray:
        # chi_r' = -(2r + 3) L_{r+1}(xh) dxh/dx
        L = legendre_eval_upto(self.N - 1, self.to_ref(x))
        r = np.arange(self.dim)
        return -(2 * r + 3) * L[..., 1 : self.N] * self.jacobian

    def second_derivatives(self, x) -> np.ndarray:
        dL = legendre_deriv_upto(self.N - 1, self.to_ref(x))
        r = np.arange(self.dim)
        return -(2 * r + 3) * dL[..., 1 : self.N] * self.jacobian**2

    def _check(self, r):
        if not 0 <= r <= self.N - 2:
            raise IndexError(f"basis index {r} outside 0..{self.N - 2}")


def chi_eval(basis: Basis, r: int, x):
    basis._check(r)
    return basis.values(x)[..., r]


def chi_deriv(basis: Basis, r: int, x):
    basis._check(r)
    return basis.derivatives(x)[..., r]


@dataclass(frozen=True)
class QuadratureRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float | np.ndarray:
        """Integral of sampled values along the first axis."""
        return np.tensordot(self.weights, values, axes=1)


def gauss_rule(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Gauss-Legendre rule with ``order`` nodes mapped affinely onto ``[a, b]``."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = leggauss(order)
    half = 0.5 * (b - a)
    return QuadratureRule(order, half * x + 0.5 * (a + b), half * w)
