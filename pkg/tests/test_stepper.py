import math

import numpy as np
import pytest

from vofwave.oracle import manufactured
from vofwave.profiles import CoefficientFn, MuProfile
from vofwave.stepper import ConfigurationError, ProblemSpec, RotheSolver, init, run


def _sin(x):
    return np.sin(np.pi * x)


def _a_weights(i, tau, mu):
    # a_q = ((i - q + 1) tau)^(-mu) / Gamma(1 - mu), q = 1..i
    return np.array([((i - q + 1) * tau) ** (-mu) / math.gamma(1 - mu) for q in range(1, i + 1)])


def _term_by_term_residual(solver, state):
    """Max relative defect of the unrolled scheme along a computed trajectory."""
    spec, sp, tau = solver.spec, solver.space, solver.tau
    M, S = sp.mass_dense, sp.stiffness_dense
    worst = 0.0
    for i in range(1, state.i + 1):
        t = i * tau
        V_i = (state.U[i] - state.U[i - 1]) / tau
        V_prev = state.V[0] if i == 1 else (state.U[i - 1] - state.U[i - 2]) / tau
        a = _a_weights(i, tau, spec.mu(t))
        frac = sum(a[q - 1] * (state.U[q] - state.U[q - 1]) for q in range(1, i + 1))
        lhs = M @ ((V_i - V_prev) / tau + spec.rho(t) * frac) + spec.beta(t) * (S @ state.U[i])
        nodal = spec.f(sp.field(state.U[i - 1]))
        if spec.source is not None:
            nodal = nodal + sp.sample(spec.source, t)
        rhs = sp.load(nodal)
        worst = max(worst, np.max(np.abs(lhs - rhs)) / np.max(np.abs(M @ state.U[i])) * tau**2)
    return worst


def test_zero_data_gives_zero(backend):
    spec = ProblemSpec(mu=MuProfile.constant(0.5))
    state, _, _ = run(spec, 8, 10)
    assert np.all(state.U == 0.0)
    assert state.i == 10


def test_two_step_hand_check(backend):
    spec = ProblemSpec(mu=MuProfile("linear", 0.3, 0.6), phi0=lambda x: x * (1 - x),
                       psi0=_sin, beta=CoefficientFn("constant", 2.0))
    solver = RotheSolver(spec, 6, 2)
    state, _ = solver.run()
    sp, tau = solver.space, 0.5
    M, S = sp.mass_dense, sp.stiffness_dense
    U0, V0 = state.U[0], state.V[0]
    # step 1: a_1 = tau^-mu / Gamma(1-mu), frac = a_1 (U1 - U0)
    a1 = tau ** -0.45 / math.gamma(0.55)
    A = M * (1 / tau**2 + a1) + 2.0 * S
    U1 = np.linalg.solve(A, M @ (U0 / tau**2 + V0 / tau + a1 * U0))
    np.testing.assert_allclose(state.U[1], U1, rtol=0, atol=1e-12 * np.max(np.abs(U1)))
    # step 2 at mu = 0.6: a = ((2 tau)^-mu, tau^-mu) / Gamma(1-mu)
    g = math.gamma(0.4)
    a_1, a_2 = (2 * tau) ** -0.6 / g, tau ** -0.6 / g
    A = M * (1 / tau**2 + a_2) + 2.0 * S
    hist = (2 * U1 - U0) / tau**2 + a_2 * U1 - a_1 * (U1 - U0)
    U2 = np.linalg.solve(A, M @ hist)
    np.testing.assert_allclose(state.U[2], U2, rtol=0, atol=1e-12 * np.max(np.abs(U2)))


@pytest.mark.parametrize("name", ["ex1", "ex2-II", "ex3"])
def test_scheme_identity(name, backend):
    solver = RotheSolver(manufactured(name).spec(), 16, 40)
    state, _ = solver.run()
    assert _term_by_term_residual(solver, state) < 1e-11


def test_mu_zero_degeneration():
    spec = ProblemSpec(mu=MuProfile.constant(0.0), phi0=_sin, psi0=lambda x: x * (1 - x) * (x - 0.2),
                       rho=CoefficientFn("exp-decay", 0.5))
    n = 20
    solver = RotheSolver(spec, 10, n)
    state, _ = solver.run()
    sp, tau = solver.space, 1.0 / n
    M, S = sp.mass_dense, sp.stiffness_dense
    U = [state.U[0]]
    prev = state.U[0] - tau * state.V[0]
    for i in range(1, n + 1):
        rho = math.exp(-0.5 * i * tau)
        # second difference plus rho (U_i - U_0) for the order-zero derivative
        A = M * (1 / tau**2 + rho) + S
        b = M @ ((2 * U[-1] - prev) / tau**2 + rho * U[0])
        prev = U[-1]
        U.append(np.linalg.solve(A, b))
    np.testing.assert_allclose(state.U, np.array(U), rtol=0, atol=1e-12)


def test_linearity_without_nonlinearity():
    g1, g2 = _sin, (lambda x: x * x * (1 - x))
    h1 = lambda x: np.sin(2 * np.pi * x)
    mu = MuProfile("quadratic", 0.5, 0.8)

    def traj(phi0, psi0):
        return run(ProblemSpec(mu=mu, phi0=phi0, psi0=psi0), 12, 30)[0].U

    A = traj(g1, h1)
    B = traj(g2, None)
    C = traj(lambda x: g1(x) + 2 * g2(x), h1)
    assert np.max(np.abs(C - (A + 2 * B))) < 1e-10


def test_parity_preserved(backend):
    state, _, _ = run(manufactured("ex1").spec(), 20, 50)
    assert np.max(np.abs(state.U[:, 1::2])) < 1e-12


def test_init_projection():
    spec = ProblemSpec(mu=MuProfile.constant(0.5), phi0=lambda x: x * (1 - x))
    solver = RotheSolver(spec, 8, 4)
    state = solver.init()
    xs = np.linspace(0, 1, 51)
    phi = solver.space.basis.values(xs) @ state.U[0]
    assert np.max(np.abs(phi - xs * (1 - xs))) < 1e-12
    assert np.all(state.V[0] == 0.0)

    st = init(ProblemSpec(mu=MuProfile.constant(0.5), phi0=_sin), 32, 4)
    from vofwave.legendre import Basis
    phi = Basis(32).values(xs) @ st.U[0]
    assert np.max(np.abs(phi - _sin(xs))) < 1e-10


def test_state_consistency():
    state, report, _ = run(manufactured("ex2-I").spec(), 10, 25)
    state.check()
    assert len(report.residuals) == 25
    assert report.max_residual < 1e-12
    np.testing.assert_allclose(state.times[-1], 1.0)


def test_dense_check_steps():
    _, report, _ = run(manufactured("ex1").spec(), 24, 30, dense_check_steps=(1, 15, 30))
    assert sorted(report.dense_deviation) == [1, 15, 30]
    assert max(report.dense_deviation.values()) < 1e-10


def test_backends_same_trajectory():
    from vofwave import kernels
    avail = kernels.available_backends()
    if len(avail) < 2:
        pytest.skip("compiled extension not built")
    spec = manufactured("ex3").spec()
    trajs = []
    for name in avail:
        impl = kernels.get_backend(name)
        saved = {k: getattr(kernels, k) for k in ("l1_weights", "history_sum", "ldl_factor", "ldl_solve")}
        try:
            for k in saved:
                setattr(kernels, k, getattr(impl, k))
            trajs.append(run(spec, 16, 80)[0].U)
        finally:
            for k, v in saved.items():
                setattr(kernels, k, v)
    np.testing.assert_allclose(trajs[0], trajs[1], rtol=1e-12, atol=1e-14)


def test_configuration_errors():
    with pytest.raises(ConfigurationError):
        RotheSolver(ProblemSpec(mu=MuProfile.constant(0.5, T=2.0), T=2.0), 8, 2)  # tau = 1
    with pytest.raises(ConfigurationError):
        RotheSolver(ProblemSpec(mu=MuProfile.constant(0.5)), 3, 10)
    with pytest.raises(ConfigurationError):
        RotheSolver(ProblemSpec(mu=MuProfile.constant(0.5)), 8, 1)
    with pytest.raises(ConfigurationError):
        RotheSolver(ProblemSpec(mu=MuProfile.constant(0.5), beta=CoefficientFn("constant", -1.0)), 8, 10)
    with pytest.raises(ConfigurationError):
        RotheSolver(ProblemSpec(mu=MuProfile.constant(0.5), phi0=lambda x: 1 + 0 * x), 8, 10)
    with pytest.raises(ConfigurationError):
        ProblemSpec(mu=MuProfile.constant(0.5), nonlinearity="cubic")
    with pytest.raises(ConfigurationError):
        ProblemSpec(mu=MuProfile.constant(0.5), a=1.0, b=0.0)


def test_step_past_end():
    solver = RotheSolver(ProblemSpec(mu=MuProfile.constant(0.5)), 6, 2)
    state, _ = solver.run()
    with pytest.raises(IndexError):
        solver.step(state)


def test_clamp():
    spec = ProblemSpec(mu=MuProfile.constant(0.5), nonlinearity="logistic+", clamp=1.0)
    np.testing.assert_allclose(spec.f(np.array([5.0, -0.5])), [2.0, -0.25])
