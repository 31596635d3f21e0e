"""Compiled inner loops for the time stepper.

Mirrors :mod:`vofwave._kernels_py` function for function; both fill
caller-provided output buffers.
"""
from libc.math cimport exp, log


def l1_weights(Py_ssize_t k, double tau, double mu, double inv_gamma,
               double[::1] a, double[::1] b):
    cdef Py_ssize_t q
    with nogil:
        for q in range(k):
            # a[q] holds a_{q+1}^k = ((k - q) tau)^(-mu) / Gamma(1 - mu)
            a[q] = exp(-mu * log((k - q) * tau)) * inv_gamma
        b[0] = -a[0]
        for q in range(1, k):
            b[q] = a[q - 1] - a[q]
        b[k] = a[k - 1]


def history_sum(double[::1] coef, double[:, ::1] hist, Py_ssize_t k,
                double[::1] out):
    cdef Py_ssize_t q, j, m = hist.shape[1]
    cdef double c
    with nogil:
        for j in range(m):
            out[j] = 0.0
        for q in range(k):
            c = coef[q]
            if c != 0.0:
                for j in range(m):
                    out[j] += c * hist[q, j]


def ldl_factor(double[::1] diag, double[::1] off, double[::1] pivots,
               double[::1] lower):
    """Return -1 on success, else the index of the first non-positive pivot."""
    cdef Py_ssize_t i, n = diag.shape[0]
    cdef Py_ssize_t bad = -1
    if n == 0:
        return -1
    with nogil:
        pivots[0] = diag[0]
        if pivots[0] <= 0.0:
            bad = 0
        else:
            for i in range(1, n):
                lower[i - 1] = off[i - 1] / pivots[i - 1]
                pivots[i] = diag[i] - lower[i - 1] * off[i - 1]
                if pivots[i] <= 0.0:
                    bad = i
                    break
    return bad


def ldl_solve(double[::1] pivots, double[::1] lower, double[::1] rhs,
              double[::1] out):
    cdef Py_ssize_t i, n = pivots.shape[0]
    if n == 0:
        return
    with nogil:
        out[0] = rhs[0]
        for i in range(1, n):
            out[i] = rhs[i] - lower[i - 1] * out[i - 1]
        for i in range(n):
            out[i] /= pivots[i]
        for i in range(n - 2, -1, -1):
            out[i] -= lower[i] * out[i + 1]
