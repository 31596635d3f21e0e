"""Mass, stiffness, projections and loads for the boundary-adapted Legendre basis.

All matrix entries are computed by Gauss quadrature. On ``[a, b]`` they reduce
to the closed forms

    m_jj = (b - a)/2 * (2/(2j+1) + 2/(2j+5)),  m_{j,j+2} = -(b - a)/2 * 2/(2j+5)
    s_jj = (2/(b - a)) * (4j + 6)

which the test-suite checks against.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .legendre import Basis, QuadratureRule, gauss_rule
from .linalg import BandedSymMatrix, factor, solve

__all__ = [
    "BandedSymMatrix",
    "SpectralSpace",
    "mass",
    "stiffness",
    "project_l2",
    "project_h1",
    "reconstruct",
]


class SpectralSpace:
    """A basis together with the quadrature rule used for every integral.

    Basis values at the nodes are tabulated once; the default rule has ``2N``
    nodes.
    """

    def __init__(self, basis: Basis, quad_order: int | None = None):
        self.basis = basis
        self.quad: QuadratureRule = gauss_rule(quad_order or 2 * basis.N, basis.a, basis.b)
        self.nodes = self.quad.nodes
        self.weights = self.quad.weights
        self.chi = basis.values(self.nodes)  # (nodes, dim)
        self.dchi = basis.derivatives(self.nodes)

    @property
    def dim(self):
        return self.basis.dim

    @cached_property
    def mass(self) -> BandedSymMatrix:
        full = self.chi.T @ (self.weights[:, None] * self.chi)
        # parity zeros and the |d - j| > 2 band come out at round-off level
        return BandedSymMatrix(np.diag(full).copy(), np.diag(full, 2).copy())

    @cached_property
    def mass_dense(self) -> np.ndarray:
        return self.chi.T @ (self.weights[:, None] * self.chi)

    @cached_property
    def stiffness(self) -> np.ndarray:
        """Diagonal of the stiffness matrix."""
        return np.einsum("q,qj,qj->j", self.weights, self.dchi, self.dchi)

    @cached_property
    def stiffness_dense(self) -> np.ndarray:
        return self.dchi.T @ (self.weights[:, None] * self.dchi)

    @cached_property
    def _mass_factors(self):
        return factor(1.0, 0.0, self.mass, np.zeros(self.dim))

    def sample(self, g, *args) -> np.ndarray:
        """``g`` evaluated at the quadrature nodes (arrays pass through)."""
        if callable(g):
            return np.broadcast_to(np.asarray(g(self.nodes, *args), dtype=float), self.nodes.shape)
        vals = np.asarray(g, dtype=float)
        if vals.shape != self.nodes.shape:
            raise ValueError("sampled field must match the quadrature nodes")
        return vals

    def load(self, values) -> np.ndarray:
        """``r_j = int g chi_j dx`` from nodal values of ``g``."""
        return self.chi.T @ (self.weights * values)

    def project_l2(self, g) -> np.ndarray:
        return solve(self._mass_factors, self.load(self.sample(g)))

    def project_h1(self, g, dg=None) -> np.ndarray:
        """H1_0 projection; without ``dg`` uses ``int g' chi' = -int g chi''`` (needs g(a) = g(b) = 0)."""
        if dg is not None:
            r = self.dchi.T @ (self.weights * self.sample(dg))
        else:
            d2chi = self.basis.second_derivatives(self.nodes)
            r = -(d2chi.T @ (self.weights * self.sample(g)))
        return r / self.stiffness

    def field(self, coeffs) -> np.ndarray:
        """Reconstruction at the quadrature nodes."""
        return self.chi @ coeffs

    def l2_norm(self, values) -> float:
        return float(np.sqrt(np.dot(self.weights, np.square(values))))


def _space(basis, quad_order):
    return SpectralSpace(basis, quad_order)


def mass(basis: Basis, quad_order: int | None = None) -> BandedSymMatrix:
    return _space(basis, quad_order).mass


def stiffness(basis: Basis, quad_order: int | None = None) -> np.ndarray:
    """Diagonal of ``S_jj = int chi_j'^2 dx``."""
    return _space(basis, quad_order).stiffness


def project_l2(basis: Basis, g, quad_order: int | None = None) -> np.ndarray:
    return _space(basis, quad_order).project_l2(g)


def project_h1(basis: Basis, g, dg=None, quad_order: int | None = None) -> np.ndarray:
    return _space(basis, quad_order).project_h1(g, dg)


def reconstruct(basis: Basis, coeffs, xs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[-1] != basis.dim:
        raise ValueError(f"expected {basis.dim} coefficients, got {coeffs.shape[-1]}")
    return basis.values(xs) @ coeffs
