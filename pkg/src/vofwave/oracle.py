"""Manufactured solutions, the constant-order series solution and error norms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .galerkin import SpectralSpace
from .legendre import gauss_rule
from .profiles import CoefficientFn, MuProfile
from .special import ML_ENVELOPE, gamma, mode_T1, mode_T2
from .stepper import NONLINEARITIES, ProblemSpec, SpectralState

__all__ = [
    "caputo_t2",
    "ManufacturedSolution",
    "PROBLEMS",
    "manufactured",
    "source",
    "SeriesSolution",
    "series_solution",
    "error_L2",
]


def caputo_t2(mu_t: float, t: float) -> float:
    """Caputo derivative of order ``mu_t`` of ``t -> t**2``: ``2 t^(2-mu) / Gamma(3-mu)``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if not 0.0 <= mu_t < 1.0:
        raise ValueError("order must lie in [0, 1)")
    return 2.0 * t ** (2.0 - mu_t) / gamma(3.0 - mu_t)


def _sin_pi(x):
    return np.sin(np.pi * x)


def _sin_pi_xx(x):
    return -np.pi**2 * np.sin(np.pi * x)


def _bump(x):
    return x * x * (1.0 - x) ** 2


def _bump_xx(x):
    return 2.0 - 12.0 * x + 12.0 * x * x


_SPACE_FACTORS = {
    "ex1": (_sin_pi, _sin_pi_xx),
    "ex2": (_bump, _bump_xx),
    "ex3": (_sin_pi, _sin_pi_xx),
}


@dataclass(frozen=True)
class ManufacturedSolution:
    """``Phi(x, t) = t^2 X(x)`` on ``(0, 1) x (0, T]`` with the matching source."""

    tag: str
    mu: MuProfile
    rho: CoefficientFn = field(default_factory=CoefficientFn)
    beta: CoefficientFn = field(default_factory=CoefficientFn)
    nonlinearity: str = "logistic+"

    def __post_init__(self):
        if self.tag not in _SPACE_FACTORS:
            raise ValueError(f"unknown manufactured solution {self.tag!r}")

    @property
    def T(self):
        return self.mu.T

    def exact(self, x, t):
        X, _ = _SPACE_FACTORS[self.tag]
        return t * t * X(np.asarray(x, dtype=float))

    def source(self, x, t):
        x = np.asarray(x, dtype=float)
        X, Xxx = _SPACE_FACTORS[self.tag]
        Xv = X(x)
        frac = caputo_t2(self.mu(t), t) if t > 0 else 0.0
        f = NONLINEARITIES[self.nonlinearity]
        return (2.0 + self.rho(t) * frac) * Xv - self.beta(t) * t * t * Xxx(x) - f(t * t * Xv)

    def spec(self) -> ProblemSpec:
        return ProblemSpec(
            mu=self.mu,
            a=0.0,
            b=1.0,
            T=self.T,
            rho=self.rho,
            beta=self.beta,
            nonlinearity=self.nonlinearity,
            source=self.source,
        )


def _ex2_profile(case):
    if case == "I":
        return MuProfile("linear", 0.6, 0.4)
    if case == "II":
        return MuProfile("quadratic", 0.5, 0.8)
    return MuProfile("oscillating-shifted", 0.6, 0.8)


PROBLEMS = {
    "ex1": lambda: ManufacturedSolution("ex1", MuProfile("oscillating", 0.2, 0.4),
                                        nonlinearity="logistic-"),
    "ex2-I": lambda: ManufacturedSolution("ex2", _ex2_profile("I")),
    "ex2-II": lambda: ManufacturedSolution("ex2", _ex2_profile("II")),
    "ex2-III": lambda: ManufacturedSolution("ex2", _ex2_profile("III")),
    "ex3": lambda: ManufacturedSolution("ex3", MuProfile.piecewise(0.25, 0.75),
                                        rho=CoefficientFn("exp-decay", 1.0)),
}


def manufactured(name: str, **overrides) -> ManufacturedSolution:
    """One of the benchmark problems, optionally with fields replaced."""
    try:
        ms = PROBLEMS[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(ms, **overrides) if overrides else ms


def source(ms: ManufacturedSolution, x, t):
    return ms.source(x, t)


class SeriesSolution:
    """Truncated eigenfunction series for the homogeneous constant-order problem.

    Solves ``Phi_tt + D^mu Phi - Phi_xx = 0`` on ``(0, L)`` with homogeneous
    Dirichlet data, using modes ``X_j = sqrt(2/L) sin(j pi x / L)``.
    ``tail_estimate`` is the norm of the projection coefficients of modes
    ``K+1..4K``, a proxy for the truncation error when the modes stay bounded.
    """

    def __init__(self, K, mu, phi0=None, psi0=None, L=1.0, quad_order=256):
        if K < 1:
            raise ValueError("need at least one mode")
        self.K, self.mu, self.L = K, float(mu), float(L)
        rule = gauss_rule(quad_order, 0.0, self.L)
        j = np.arange(1, 4 * K + 1)
        Xq = self._modes(rule.nodes, j)
        zero = np.zeros_like(rule.nodes)
        p0 = zero if phi0 is None else np.asarray(phi0(rule.nodes), dtype=float)
        v0 = zero if psi0 is None else np.asarray(psi0(rule.nodes), dtype=float)
        c1 = rule.integrate(Xq * p0[:, None])
        c2 = rule.integrate(Xq * v0[:, None])
        self.kappa = (j[:K] * np.pi / self.L) ** 2
        self.c1, self.c2 = c1[:K], c2[:K]
        self.tail_estimate = float(np.sqrt(np.sum(c1[K:] ** 2 + c2[K:] ** 2)))

    def _modes(self, x, j):
        x = np.asarray(x, dtype=float)
        return math.sqrt(2.0 / self.L) * np.sin(np.multiply.outer(x, j) * np.pi / self.L)

    def time_factors(self, t):
        if self.K and self.kappa[-1] * t * t > ML_ENVELOPE:
            raise ValueError("kappa t^2 outside the Mittag-Leffler envelope; reduce K or t")
        out = np.zeros(self.K)
        for j, (k, c1, c2) in enumerate(zip(self.kappa, self.c1, self.c2)):
            if c1 != 0.0:
                out[j] += c1 * mode_T1(k, self.mu, t)
            if c2 != 0.0:
                out[j] += c2 * mode_T2(k, self.mu, t)
        return out

    def __call__(self, x, t):
        X = self._modes(x, np.arange(1, self.K + 1))
        return X @ self.time_factors(t)


def series_solution(K, mu, phi0, psi0, x, t, L=1.0) -> float | np.ndarray:
    return SeriesSolution(K, mu, phi0, psi0, L)(x, t)


def error_L2(space: SpectralSpace, state: SpectralState, exact, n: int | None = None) -> float:
    """``max_{1<=i<=n} || Phi^N_i - Phi(t_i) ||_{L2}`` by the space's quadrature."""
    n = state.i if n is None else n
    worst = 0.0
    for i in range(1, n + 1):
        t = i * state.tau
        diff = space.field(state.U[i]) - space.sample(exact, t)
        worst = max(worst, space.l2_norm(diff))
    return worst
