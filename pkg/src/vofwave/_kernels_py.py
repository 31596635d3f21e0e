"""Pure-Python/NumPy versions of the compiled kernels in ``_ckernels.pyx``."""
import numpy as np


def l1_weights(k, tau, mu, inv_gamma, a, b):
    # a[q] holds a_{q+1}^k = ((k - q) tau)^(-mu) / Gamma(1 - mu)
    a[:k] = np.power(np.arange(k, 0, -1) * tau, -mu) * inv_gamma
    b[0] = -a[0]
    b[1:k] = a[: k - 1] - a[1:k]
    b[k] = a[k - 1]


def history_sum(coef, hist, k, out):
    np.dot(coef[:k], hist[:k], out=out)


def ldl_factor(diag, off, pivots, lower):
    """Return -1 on success, else the index of the first non-positive pivot."""
    n = len(diag)
    if n == 0:
        return -1
    p = float(diag[0])
    pivots[0] = p
    if p <= 0.0:
        return 0
    for i in range(1, n):
        e = float(off[i - 1])
        l = e / p
        lower[i - 1] = l
        p = float(diag[i]) - l * e
        pivots[i] = p
        if p <= 0.0:
            return i
    return -1


def ldl_solve(pivots, lower, rhs, out):
    n = len(pivots)
    if n == 0:
        return
    y = float(rhs[0])
    out[0] = y
    for i in range(1, n):
        y = float(rhs[i]) - float(lower[i - 1]) * y
        out[i] = y
    out[:n] /= pivots[:n]
    x = float(out[n - 1])
    for i in range(n - 2, -1, -1):
        x = float(out[i]) - float(lower[i]) * x
        out[i] = x
