"""Self-checks behind ``vofwave validate``.

Each check returns ``(name, passed, detail)``. They exercise the same
invariants as the test-suite, on smaller samples, so an installed copy can be
verified without pytest.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.integrate import quad

from .caputo import weights
from .galerkin import SpectralSpace
from .legendre import Basis, gauss_rule
from .linalg import BandedSymMatrix, dense_solve, factor, solve
from .oracle import SeriesSolution, caputo_t2, manufactured
from .profiles import MuProfile
from .special import mode_T1, mode_T1_prime, mode_T1_second
from .stepper import ProblemSpec, RotheSolver

__all__ = ["run_all", "CHECKS"]

_PROFILES = (
    MuProfile("oscillating", 0.2, 0.4),
    MuProfile("linear", 0.6, 0.4),
    MuProfile("quadratic", 0.5, 0.8),
    MuProfile("oscillating-shifted", 0.6, 0.8),
    MuProfile.piecewise(0.25, 0.75),
    MuProfile.constant(0.0),
)


def check_weights(draws=200, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        tau = 2.0 ** -int(rng.integers(4, 13))
        kmax = min(512, int(round(1.0 / tau)))
        k = int(rng.integers(1, kmax + 1))
        w = weights(k, tau, _PROFILES[int(rng.integers(len(_PROFILES)))])
        scale = w.a[-1]
        worst = max(worst, abs(w.b.sum()) / scale)
        if np.any(w.b[:-1] > 0) or np.any(np.diff(w.a) < 0) or np.any(w.a <= 0):
            return False, f"sign/monotonicity violated at k={k}, tau={tau}"
    return worst < 1e-12, f"max |sum b| / a_k = {worst:.1e} over {draws} draws"


def check_banded_vs_dense(systems=50, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(systems):
        N = int(rng.integers(4, 65))
        sp = SpectralSpace(Basis(N, 0.0, float(rng.uniform(0.5, 3.0))))
        d, beta = float(rng.uniform(1, 1e6)), float(rng.uniform(0.1, 10))
        rhs = rng.standard_normal(sp.dim)
        x = solve(factor(d, beta, sp.mass, sp.stiffness), rhs)
        ref = dense_solve(d * sp.mass_dense + beta * np.diag(sp.stiffness), rhs)
        worst = max(worst, np.max(np.abs(x - ref)) / np.max(np.abs(ref)))
    return worst < 1e-10, f"max relative deviation {worst:.1e} over {systems} systems"


def check_scheme_steps():
    ms = manufactured("ex1")
    n = 200
    solver = RotheSolver(ms.spec(), 50, n)
    _, report = solver.run(dense_check_steps=(1, n // 2, n))
    worst = max(report.dense_deviation.values())
    return worst < 1e-10, f"banded vs dense on steps {sorted(report.dense_deviation)}: {worst:.1e}"


def check_gauss(qmax=32):
    worst = 0.0
    for q in range(1, qmax + 1):
        rule = gauss_rule(q, 0.0, 1.0)
        for p in range(2 * q):
            exact = 1.0 / (p + 1)
            worst = max(worst, abs(rule.integrate(rule.nodes**p) - exact) / exact)
    return worst < 1e-12, f"max relative error {worst:.1e} for degree <= 2q-1, q <= {qmax}"


def check_matrices():
    worst = 0.0
    for N, (a, b) in ((8, (-1.0, 1.0)), (17, (0.0, 1.0)), (40, (-0.5, 2.5))):
        sp = SpectralSpace(Basis(N, a, b))
        j = np.arange(sp.dim)
        half = 0.5 * (b - a)
        diag = half * (2 / (2 * j + 1) + 2 / (2 * j + 5))
        off = -half * 2 / (2 * j[:-2] + 5)
        M = BandedSymMatrix(diag, off).to_dense()
        S = np.diag((4 * j + 6) * 2 / (b - a))
        worst = max(worst,
                    np.max(np.abs(sp.mass_dense - M)) / np.max(np.abs(M)),
                    np.max(np.abs(sp.stiffness_dense - S)) / np.max(np.abs(S)))
    return worst < 1e-12, f"max entry deviation from closed forms (relative to max entry) {worst:.1e}"


def check_caputo_t2():
    worst = 0.0
    for mu in (0.0, 0.25, 0.5, 0.75, 0.99):
        for t in (0.1, 0.5, 1.0):
            if mu == 0.0:
                ref = t * t
            else:
                val, _ = quad(lambda r: 2 * r, 0.0, t, weight="alg", wvar=(0.0, -mu),
                              epsabs=1e-14, epsrel=1e-13)
                ref = val / math.gamma(1 - mu)
            worst = max(worst, abs(caputo_t2(mu, t) - ref))
    return worst < 1e-9, f"max deviation from quadrature {worst:.1e}"


def check_series_residual(kappa=math.pi**2, mu=0.5):
    worst = 0.0
    for t in (0.1, 0.25, 0.5, 0.75, 1.0):
        val, _ = quad(lambda r: mode_T1_prime(kappa, mu, r), 0.0, t, weight="alg",
                      wvar=(0.0, -mu), epsabs=1e-13)
        frac = val / math.gamma(1 - mu)
        res = mode_T1_second(kappa, mu, t) + frac + kappa * mode_T1(kappa, mu, t)
        worst = max(worst, abs(res))
    return worst < 1e-6, f"max ODE residual {worst:.1e}"


def check_series_vs_scheme():
    series = SeriesSolution(1, 0.5, phi0=lambda x: np.sin(np.pi * x))
    spec = ProblemSpec(mu=MuProfile.constant(0.5), phi0=lambda x: np.sin(np.pi * x))
    solver = RotheSolver(spec, 32, 512)
    state, _ = solver.run()
    sp = solver.space
    err = sp.l2_norm(sp.field(state.U[256]) - series(sp.nodes, 0.5))
    return err < 5e-2, f"L2 distance at t=0.5 (n=512, N=32): {err:.2e}"


CHECKS = {
    "weight identities": check_weights,
    "banded vs dense (random)": check_banded_vs_dense,
    "banded vs dense (scheme steps)": check_scheme_steps,
    "gauss exactness": check_gauss,
    "mass/stiffness closed forms": check_matrices,
    "caputo of t^2": check_caputo_t2,
    "series ODE residual": check_series_residual,
    "series vs scheme": check_series_vs_scheme,
}


def run_all(threads=1):
    def one(item):
        name, fn = item
        try:
            passed, detail = fn()
        except Exception as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        return name, bool(passed), detail

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, CHECKS.items()))
