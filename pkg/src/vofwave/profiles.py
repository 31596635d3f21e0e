"""Variable fractional orders mu(t) and time-only coefficients rho(t), beta(t)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["MuProfile", "CoefficientFn", "MU_KINDS", "mu_eval", "mu_bar"]

MU_KINDS = (
    "constant",
    "linear",
    "quadratic",
    "oscillating",
    "oscillating-shifted",
    "piecewise-step",
    "tabulated",
)

_TWO_PI = 2.0 * math.pi
_T_SLACK = 1e-12


@dataclass(frozen=True)
class MuProfile:
    """A named order profile on ``[0, T]``.

    ``mu0`` and ``muT`` are the parameters the profile formula is written in.
    For every kind except ``oscillating-shifted`` they are also the values at
    ``t = 0`` and ``t = T``; for ``piecewise-step`` they are the values left and
    right of ``switch`` (default ``T / 2``), with right-continuity at ``t = 0``.
    ``tabulated`` interpolates ``table = (ts, mus)`` linearly.
    """

    kind: str
    mu0: float = 0.0
    muT: float = 0.0
    T: float = 1.0
    switch: float | None = None
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in MU_KINDS:
            raise ValueError(f"unknown mu profile kind {self.kind!r}; expected one of {MU_KINDS}")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.kind == "tabulated":
            if self.table is None:
                raise ValueError("tabulated profile needs table=(ts, mus)")
            ts, mus = self.table
            if len(ts) != len(mus) or len(ts) < 2 or np.any(np.diff(ts) <= 0):
                raise ValueError("table must hold >= 2 strictly increasing times with matching orders")
            object.__setattr__(self, "table", (tuple(map(float, ts)), tuple(map(float, mus))))
        if self.kind == "constant":
            object.__setattr__(self, "muT", self.mu0)
        lo, hi = self._range()
        if lo < 0.0 or hi >= 1.0:
            raise ValueError(f"order profile must satisfy 0 <= mu(t) < 1, got range [{lo}, {hi}]")

    @classmethod
    def constant(cls, mu, T=1.0):
        return cls("constant", mu, mu, T)

    @classmethod
    def piecewise(cls, left=0.25, right=0.75, T=1.0, switch=None):
        return cls("piecewise-step", left, right, T, switch=switch)

    @property
    def switch_time(self):
        return 0.5 * self.T if self.switch is None else self.switch

    def _range(self):
        a, b = self.mu0, self.muT
        if self.kind == "oscillating-shifted":
            w = 1.0 / _TWO_PI
            ends = (b + (a - b) * (1 - w), b + (a - b) * (1 + w))
            return min(ends), max(ends)
        if self.kind == "tabulated":
            return min(self.table[1]), max(self.table[1])
        return min(a, b), max(a, b)

    def __call__(self, t):
        return mu_eval(self, t)

    @property
    def bar(self):
        return mu_bar(self)


def mu_eval(profile: MuProfile, t: float) -> float:
    """Order ``mu(t)``; raises ``ValueError`` outside ``[0, T]``."""
    T = profile.T
    if not (-_T_SLACK <= t <= T * (1 + _T_SLACK)):
        raise ValueError(f"t={t!r} outside [0, {T}]")
    s = min(max(t / T, 0.0), 1.0)
    a, b, kind = profile.mu0, profile.muT, profile.kind
    if kind == "constant":
        return a
    if kind == "linear":
        return b + (a - b) * (1.0 - s)
    if kind == "quadratic":
        return b + (a - b) * (1.0 - s * s)
    if kind == "oscillating":
        return b + (a - b) * (1.0 - s - math.sin(_TWO_PI * (1.0 - s)) / _TWO_PI)
    if kind == "oscillating-shifted":
        return b + (a - b) * (1.0 - math.sin(_TWO_PI * (1.0 - s)) / _TWO_PI)
    if kind == "piecewise-step":
        return a if t <= profile.switch_time else b
    ts, mus = profile.table
    return float(np.interp(t, ts, mus))


def mu_bar(profile: MuProfile) -> float:
    """Supremum of ``mu`` over ``[0, T]``."""
    return profile._range()[1]


@dataclass(frozen=True)
class CoefficientFn:
    """``constant``: c(t) = value.  ``exp-decay``: c(t) = exp(-value * t)."""

    kind: str = "constant"
    value: float = 1.0

    def __post_init__(self):
        if self.kind not in ("constant", "exp-decay"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")

    def __call__(self, t):
        if self.kind == "constant":
            return self.value
        return math.exp(-self.value * t)

    def lower_bound(self, T):
        """Infimum over ``[0, T]``."""
        if self.kind == "constant":
            return self.value
        return min(1.0, math.exp(-self.value * T))
