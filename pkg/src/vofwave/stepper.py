"""Rothe time stepping with a Legendre-Galerkin space discretisation.

Step ``i`` solves the linearly implicit system

    (d_i M + beta_i S) U_i = L_i + M * sum_{q<i} bhat_q^i U_q

with ``d_i = 1/tau^2 + rho_i b_i^i``, ``bhat_q^i = -rho_i b_q^i + delta_{q,i-1}/tau^2``
and load ``L_i = (Q(t_i) + f(Phi_{i-1}), chi) + M V_i / tau`` where
``V_i = (U_{i-1} - U_{i-2}) / tau`` (``V_1`` is the projected initial velocity).
The nonlinearity is lagged, so there is no inner iteration.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .galerkin import SpectralSpace
from .legendre import Basis
from .linalg import dense_solve, factor, solve
from .profiles import CoefficientFn, MuProfile
from .special import gamma

__all__ = [
    "ConfigurationError",
    "NONLINEARITIES",
    "ProblemSpec",
    "SpectralState",
    "SolveReport",
    "RotheSolver",
    "init",
    "run",
]

log = logging.getLogger(__name__)

Field = Callable[..., np.ndarray]

NONLINEARITIES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "zero": lambda phi: np.zeros_like(phi),
    "logistic-": lambda phi: phi * (1.0 - phi),
    "logistic+": lambda phi: phi * (1.0 + phi),
}


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    """Data of ``Phi_tt + rho(t) D^mu(t) Phi = (beta(t) Phi_x)_x + f(Phi) + Q`` on ``(a, b) x (0, T]``.

    ``source(x, t)``, ``phi0(x)``, ``psi0(x)`` and ``phi0_dx(x)`` take arrays of
    points. Missing initial data means zero; a missing source means ``Q = 0``.
    """

    mu: MuProfile
    a: float = 0.0
    b: float = 1.0
    T: float = 1.0
    rho: CoefficientFn = field(default_factory=CoefficientFn)
    beta: CoefficientFn = field(default_factory=CoefficientFn)
    nonlinearity: str = "zero"
    source: Field | None = None
    phi0: Field | None = None
    psi0: Field | None = None
    phi0_dx: Field | None = None
    clamp: float | None = None

    def __post_init__(self):
        if self.nonlinearity not in NONLINEARITIES:
            raise ConfigurationError(f"unknown nonlinearity {self.nonlinearity!r}")
        if not self.b > self.a:
            raise ConfigurationError("domain requires b > a")
        if abs(self.mu.T - self.T) > 1e-12 * self.T:
            raise ConfigurationError("mu profile horizon differs from T")

    def f(self, phi):
        if self.clamp is not None:
            phi = np.clip(phi, -self.clamp, self.clamp)
        return NONLINEARITIES[self.nonlinearity](phi)

    def validate(self, samples=257):
        """Check the sign conditions on rho, beta and the boundary values of phi0."""
        ts = np.linspace(0.0, self.T, samples)
        if min(self.beta(t) for t in ts) <= 0:
            raise ConfigurationError("beta must be bounded below by a positive constant")
        if min(self.rho(t) for t in ts) < 0:
            raise ConfigurationError("rho must be non-negative")
        if self.phi0 is not None:
            ends = np.asarray(self.phi0(np.array([self.a, self.b])), dtype=float)
            if np.max(np.abs(ends)) > 1e-10:
                raise ConfigurationError("phi0 must vanish on the boundary")


@dataclass
class SpectralState:
    """Coefficient trajectory ``U[0..i]`` and backward differences ``V[0..i]``.

    ``V[0]`` is the projected initial velocity; ``V[j] = (U[j] - U[j-1]) / tau``
    for ``j >= 1``. Rows beyond ``i`` are unused.
    """

    U: np.ndarray
    V: np.ndarray
    tau: float
    i: int = 0

    @property
    def n(self) -> int:
        return self.U.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.i + 1) * self.tau

    def check(self):
        i = self.i
        if i >= 1:
            dU = (self.U[1 : i + 1] - self.U[:i]) / self.tau
            assert np.array_equal(dU, self.V[1 : i + 1]), "V inconsistent with U"


@dataclass
class SolveReport:
    wall_time: float = 0.0
    residuals: list = field(default_factory=list)
    dense_deviation: dict = field(default_factory=dict)
    backend: str = kernels.BACKEND

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


class RotheSolver:
    """Fully discrete solver for one ``(spec, N, n)`` configuration."""

    def __init__(self, spec: ProblemSpec, N: int, n: int, quad_order: int | None = None):
        if N < 4:
            raise ConfigurationError("N must be >= 4")
        if n < 2:
            raise ConfigurationError("n must be >= 2")
        tau = spec.T / n
        if tau >= 1.0:
            raise ConfigurationError(f"time step tau = T/n = {tau} must be < 1")
        spec.validate()
        self.spec = spec
        self.N, self.n, self.tau = N, n, tau
        self.space = SpectralSpace(Basis(N, spec.a, spec.b), quad_order)
        self.M = self.space.mass
        self.S = self.space.stiffness
        self._a = np.empty(n)
        self._b = np.empty(n + 1)
        self._bhat = np.empty(n)
        self._hist = np.empty(self.space.dim)

    def init(self) -> SpectralState:
        spec, sp, n = self.spec, self.space, self.n
        U = np.zeros((n + 1, sp.dim))
        V = np.zeros((n + 1, sp.dim))
        if spec.phi0 is not None:
            U[0] = sp.project_h1(spec.phi0, spec.phi0_dx)
        if spec.psi0 is not None:
            V[0] = sp.project_l2(spec.psi0)
        return SpectralState(U, V, self.tau)

    def assemble(self, state: SpectralState):
        """Coefficients ``(d_i, beta_i)`` and right-hand side for step ``i = state.i + 1``."""
        i = state.i + 1
        if i > self.n:
            raise IndexError("trajectory already complete")
        spec, sp, tau = self.spec, self.space, self.tau
        t = i * tau
        mu_i, rho_i, beta_i = spec.mu(t), spec.rho(t), spec.beta(t)
        kernels.l1_weights(i, tau, mu_i, 1.0 / gamma(1.0 - mu_i), self._a, self._b)
        d = 1.0 / tau**2 + rho_i * self._b[i]
        bhat = self._bhat
        np.multiply(self._b[:i], -rho_i, out=bhat[:i])
        bhat[i - 1] += 1.0 / tau**2
        kernels.history_sum(bhat, state.U, i, self._hist)

        nodal = spec.f(sp.field(state.U[i - 1]))
        if spec.source is not None:
            nodal = nodal + sp.sample(spec.source, t)
        rhs = sp.load(nodal) + self.M.matvec(state.V[i - 1] / tau + self._hist)
        return d, beta_i, rhs

    def step(self, state: SpectralState, report: SolveReport | None = None,
             dense_check: bool = False) -> SpectralState:
        d, beta_i, rhs = self.assemble(state)
        system = factor(d, beta_i, self.M, self.S)
        U_i = solve(system, rhs)
        i = state.i + 1
        if report is not None:
            res = d * self.M.matvec(U_i) + beta_i * self.S * U_i - rhs
            report.residuals.append(float(np.max(np.abs(res)) / max(np.max(np.abs(rhs)), 1e-300)))
            if dense_check:
                A = d * self.space.mass_dense + beta_i * np.diag(self.S)
                ref = dense_solve(A, rhs)
                dev = np.max(np.abs(U_i - ref)) / max(np.max(np.abs(ref)), 1e-300)
                report.dense_deviation[i] = float(dev)
        state.U[i] = U_i
        state.V[i] = (U_i - state.U[i - 1]) / self.tau
        state.i = i
        return state

    def run(self, dense_check_steps=()) -> tuple[SpectralState, SolveReport]:
        report = SolveReport()
        checks = set(dense_check_steps)
        start = time.perf_counter()
        state = self.init()
        for i in range(1, self.n + 1):
            self.step(state, report, dense_check=i in checks)
        report.wall_time = time.perf_counter() - start
        log.debug("run N=%d n=%d finished in %.3fs (max residual %.2e)",
                  self.N, self.n, report.wall_time, report.max_residual)
        return state, report


def init(spec: ProblemSpec, N: int, n: int, quad_order: int | None = None) -> SpectralState:
    return RotheSolver(spec, N, n, quad_order).init()


def run(spec: ProblemSpec, N: int, n: int, quad_order: int | None = None,
        dense_check_steps=()) -> tuple[SpectralState, SolveReport, RotheSolver]:
    """Solve to ``T``; returns the trajectory, the report and the solver (for its space)."""
    solver = RotheSolver(spec, N, n, quad_order)
    state, report = solver.run(dense_check_steps)
    return state, report, solver
