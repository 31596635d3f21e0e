import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vofwave.profiles import CoefficientFn, MuProfile, mu_bar, mu_eval

MONOTONE = ["constant", "linear", "quadratic", "oscillating"]


def test_named_values():
    assert mu_eval(MuProfile("oscillating", 0.2, 0.4), 0.0) == pytest.approx(0.2)
    assert mu_eval(MuProfile("linear", 0.6, 0.4), 1.0) == pytest.approx(0.4)
    assert mu_eval(MuProfile.piecewise(0.25, 0.75), 0.75) == 0.75
    assert mu_eval(MuProfile.piecewise(0.25, 0.75), 0.5) == 0.25
    assert mu_eval(MuProfile.piecewise(0.25, 0.75), 0.0) == 0.25


def test_mu_bar():
    assert mu_bar(MuProfile("linear", 0.6, 0.4)) == 0.6
    assert mu_bar(MuProfile.piecewise(0.25, 0.75)) == 0.75
    assert mu_bar(MuProfile("quadratic", 0.5, 0.8)) == 0.8


def test_shifted_oscillation_range():
    # 0.8 - 0.2 (1 - sin(2 pi (1 - t)) / (2 pi)) attains 0.6 at both ends
    p = MuProfile("oscillating-shifted", 0.6, 0.8)
    assert p(0.0) == pytest.approx(0.6)
    assert p(1.0) == pytest.approx(0.6)
    grid = np.linspace(0, 1, 100001)
    assert mu_bar(p) == pytest.approx(max(p(t) for t in grid), abs=1e-9)
    assert 1 - mu_bar(p) == pytest.approx(0.368, abs=5e-4)


@pytest.mark.parametrize("kind", MONOTONE)
def test_endpoints(kind):
    p = MuProfile(kind, 0.3, 0.7, T=2.0)
    assert p(0.0) == pytest.approx(p.mu0)
    assert p(2.0) == pytest.approx(p.muT)


@pytest.mark.parametrize("kind", MONOTONE + ["oscillating-shifted", "piecewise-step"])
def test_bounds_on_grid(kind):
    p = MuProfile(kind, 0.6, 0.8)
    vals = np.array([p(t) for t in np.linspace(0, 1, 10_000)])
    assert np.all(vals >= 0) and np.all(vals < 1)
    assert vals.max() <= mu_bar(p) + 1e-12


@given(st.floats(0.0, 0.95), st.floats(0.0, 0.95), st.sampled_from(MONOTONE[1:]))
def test_sup_of_monotone_profiles(m0, mT, kind):
    p = MuProfile(kind, m0, mT)
    grid = np.linspace(0, 1, 2001)
    assert max(p(t) for t in grid) == pytest.approx(max(m0, mT), abs=1e-12)


def test_tabulated():
    p = MuProfile("tabulated", table=((0.0, 0.5, 1.0), (0.1, 0.5, 0.3)))
    assert p(0.25) == pytest.approx(0.3)
    assert mu_bar(p) == 0.5


def test_errors():
    with pytest.raises(ValueError):
        MuProfile("linear", 0.6, 1.0)
    with pytest.raises(ValueError):
        MuProfile("cubic", 0.1, 0.2)
    with pytest.raises(ValueError):
        mu_eval(MuProfile("linear", 0.6, 0.4), 1.5)
    with pytest.raises(ValueError):
        MuProfile("tabulated", table=((0.0, 0.0), (0.1, 0.2)))


def test_coefficients():
    assert CoefficientFn()(0.3) == 1.0
    rho = CoefficientFn("exp-decay", 1.0)
    assert rho(1.0) == pytest.approx(math.exp(-1))
    assert rho.lower_bound(1.0) == pytest.approx(math.exp(-1))
    with pytest.raises(ValueError):
        CoefficientFn("linear", 1.0)
