r"""Discrete variable-order Caputo operator on a uniform time grid.

At step :math:`k` with order :math:`\mu_k = \mu(t_k)` the derivative is
approximated by

.. math::

    D_\tau^{\mu_k}\Phi_k = \sum_{q=1}^k a_q^k (\Phi_q - \Phi_{q-1})
                       = \sum_{q=0}^k b_q^k \Phi_q,
    \qquad a_q^k = \frac{(t_k - t_{q-1})^{-\mu_k}}{\Gamma(1 - \mu_k)}.

The kernel is frozen at the current order, so weights must be rebuilt at
every step when ``mu`` varies.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .profiles import MuProfile
from .special import gamma

__all__ = ["KernelWeights", "weights", "apply_history", "discrete_caputo"]


@dataclass(frozen=True)
class KernelWeights:
    """Weights of step ``k``: ``a[q-1] = a_q^k`` (q = 1..k), ``b[q] = b_q^k`` (q = 0..k)."""

    k: int
    mu_k: float
    tau: float
    a: np.ndarray
    b: np.ndarray


def _order(profile, t):
    if isinstance(profile, MuProfile):
        return profile(t)
    return float(profile)


def weights(k: int, tau: float, profile: MuProfile | float) -> KernelWeights:
    """Weights for step ``k``; ``profile`` may also be a fixed order."""
    if k < 1:
        raise ValueError("step index k must be >= 1")
    if not tau > 0:
        raise ValueError("tau must be positive")
    mu_k = _order(profile, k * tau)
    a = np.empty(k)
    b = np.empty(k + 1)
    kernels.l1_weights(k, tau, mu_k, 1.0 / gamma(1.0 - mu_k), a, b)
    return KernelWeights(k, mu_k, tau, a, b)


def apply_history(w: KernelWeights, values) -> np.ndarray | float:
    """``sum_q b_q^k values[q]`` for a sequence of ``k + 1`` scalars or vectors."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] != w.k + 1:
        raise ValueError(f"expected {w.k + 1} values for step {w.k}, got {values.shape[0]}")
    out = np.tensordot(w.b, values, axes=1)
    return float(out) if out.ndim == 0 else out


def discrete_caputo(values, tau: float, profile: MuProfile | float) -> np.ndarray:
    """``D_tau`` at every step 1..n of a sampled trajectory ``values[0..n]``."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0] - 1
    out = np.empty((n,) + values.shape[1:])
    for k in range(1, n + 1):
        out[k - 1] = apply_history(weights(k, tau, profile), values[: k + 1])
    return out
