r"""Gamma function and the two-term multinomial Mittag-Leffler function.

The time modes of the constant-order, homogeneous problem

.. math::

    T'' + \partial_t^\mu T + \kappa T = 0

are expressed through

.. math::

    E_{(\alpha_1, \alpha_2), \beta}(z_1, z_2)
        = \sum_{k=0}^\infty \sum_{k_1 + k_2 = k} \binom{k}{k_2}
          \frac{z_1^{k_1} z_2^{k_2}}{\Gamma(\beta + \alpha_1 k_1 + \alpha_2 k_2)}

with :math:`\alpha_1 = 2` and :math:`\alpha_2 = 2 - \mu`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, rgamma

__all__ = [
    "MLParams",
    "SeriesNotConverged",
    "ML_ENVELOPE",
    "gamma",
    "ml2",
    "mode_T1",
    "mode_T2",
    "mode_T1_prime",
    "mode_T2_prime",
    "mode_T1_second",
    "mode_T2_second",
]

#: Largest |z1|, |z2| for which :func:`ml2` is trusted in double precision.
ML_ENVELOPE = 150.0
#: Maximum number of diagonals k = k1 + k2 summed.
ML_TERM_CAP = 400


class SeriesNotConverged(ArithmeticError):
    """Raised when the series does not reach its tolerance within the term cap."""

    def __init__(self, message, partial_sum):
        super().__init__(message)
        self.partial_sum = partial_sum


def gamma(x: float) -> float:
    """Gamma function for positive real arguments."""
    if not x > 0.0:
        raise ValueError(f"gamma: argument must be positive, got {x!r}")
    return math.gamma(x)


@dataclass(frozen=True)
class MLParams:
    """Parameters ``(alpha1, alpha2), beta`` of the two-term series."""

    alpha1: float
    alpha2: float
    beta: float

    def __post_init__(self):
        if not (self.alpha1 > 0 and self.alpha2 > 0):
            raise ValueError("alpha1 and alpha2 must be positive")

    @classmethod
    def wave(cls, mu: float, beta: float) -> "MLParams":
        """The ``(2, 2 - mu)`` family used by the damped wave modes."""
        return cls(2.0, 2.0 - mu, beta)


def _log_abs_and_sign(z, powers):
    # z**powers as (log|.|, sign), with 0**0 = 1
    if z == 0.0:
        logs = np.where(powers == 0, 0.0, -np.inf)
        return logs, np.ones_like(powers, dtype=float)
    logs = powers * math.log(abs(z))
    sign = np.where((powers % 2 == 1) & (z < 0), -1.0, 1.0)
    return logs, sign


def ml2(params: MLParams, z1: float, z2: float, tol: float = 1e-15) -> float:
    """Evaluate :math:`E_{(\\alpha_1,\\alpha_2),\\beta}(z_1, z_2)` by direct summation.

    The double series is summed along diagonals ``k = k1 + k2``. Summation stops
    once three consecutive diagonals have absolute term mass below ``tol``.
    Terms whose Gamma argument is a non-positive integer vanish (``1/Gamma``
    has zeros there).

    Raises
    ------
    SeriesNotConverged
        If ``tol`` is not reached within 400 diagonals.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if abs(z1) > ML_ENVELOPE or abs(z2) > ML_ENVELOPE:
        raise ValueError(
            f"ml2: |z| exceeds the convergence envelope {ML_ENVELOPE} "
            f"(z1={z1!r}, z2={z2!r})"
        )
    total = 0.0
    quiet = 0
    for k in range(ML_TERM_CAP):
        k1 = np.arange(k + 1)
        k2 = k - k1
        arg = params.beta + params.alpha1 * k1 + params.alpha2 * k2
        log_binom = gammaln(k + 1) - gammaln(k1 + 1) - gammaln(k2 + 1)
        l1, s1 = _log_abs_and_sign(z1, k1)
        l2, s2 = _log_abs_and_sign(z2, k2)
        terms = s1 * s2 * np.exp(log_binom + l1 + l2) * rgamma(arg)
        total += math.fsum(terms)
        if np.abs(terms).sum() < tol:
            quiet += 1
            if quiet == 3:
                return total
        else:
            quiet = 0
    raise SeriesNotConverged(
        f"ml2 did not converge to tol={tol} within {ML_TERM_CAP} diagonals", total
    )


def _args(kappa, mu, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    return -kappa * t * t, -(t ** (2.0 - mu))


def _E(mu, beta, kappa, t):
    z1, z2 = _args(kappa, mu, t)
    return ml2(MLParams.wave(mu, beta), z1, z2)


def mode_T1(kappa: float, mu: float, t: float) -> float:
    """Mode with ``T(0) = 1, T'(0) = 0``."""
    if t == 0:
        return 1.0
    return 1.0 - kappa * t * t * _E(mu, 3.0, kappa, t)


def mode_T2(kappa: float, mu: float, t: float) -> float:
    """Mode with ``T(0) = 0, T'(0) = 1``."""
    if t == 0:
        return 0.0
    return t * _E(mu, 2.0, kappa, t)


def mode_T1_prime(kappa: float, mu: float, t: float) -> float:
    return -kappa * t * _E(mu, 2.0, kappa, t)


def mode_T2_prime(kappa: float, mu: float, t: float) -> float:
    return _E(mu, 1.0, kappa, t)


def mode_T1_second(kappa: float, mu: float, t: float) -> float:
    return -kappa * _E(mu, 1.0, kappa, t)


def mode_T2_second(kappa: float, mu: float, t: float) -> float:
    # behaves like -t^(1 - mu) / Gamma(2 - mu) near the origin
    return -kappa * t * _E(mu, 2.0, kappa, t) - t ** (1.0 - mu) * _E(mu, 2.0 - mu, kappa, t)
