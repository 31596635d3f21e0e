"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat R] [--n N ...]

Times each hot kernel in isolation and a full Example-1 solve (N = 50) per
backend, then prints the speed-up. The python backend is always available;
the compiled one only when the extension was built.
"""
import argparse
import contextlib
import time

import numpy as np

from vofwave import kernels
from vofwave.oracle import manufactured
from vofwave.stepper import RotheSolver

KERNELS = ("l1_weights", "history_sum", "ldl_factor", "ldl_solve")


@contextlib.contextmanager
def use_backend(name):
    impl = kernels.get_backend(name)
    saved = {k: getattr(kernels, k) for k in KERNELS}
    try:
        for k in KERNELS:
            setattr(kernels, k, getattr(impl, k))
        yield impl
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_timings(impl, repeat, k=1600, dim=49):
    rng = np.random.default_rng(0)
    a, b = np.empty(k), np.empty(k + 1)
    coef, hist, out = rng.standard_normal(k), rng.standard_normal((k + 1, dim)), np.empty(dim)
    m = dim // 2 + 1
    diag, off = rng.uniform(3, 4, m), rng.uniform(-1, 1, m - 1)
    piv, low, rhs, x = np.empty(m), np.empty(m - 1), rng.standard_normal(m), np.empty(m)
    impl.ldl_factor(diag, off, piv, low)

    def many(f, times=200):
        return lambda: [f() for _ in range(times)]

    return {
        "l1_weights (k=1600) x200": best_of(many(lambda: impl.l1_weights(k, 1 / k, 0.4, 1.1, a, b)), repeat),
        "history_sum (k=1600) x200": best_of(many(lambda: impl.history_sum(coef, hist, k, out)), repeat),
        "ldl_factor (25) x200": best_of(many(lambda: impl.ldl_factor(diag, off, piv, low)), repeat),
        "ldl_solve (25) x200": best_of(many(lambda: impl.ldl_solve(piv, low, rhs, x)), repeat),
    }


def solve_timing(n, repeat):
    spec = manufactured("ex1").spec()
    return best_of(lambda: RotheSolver(spec, 50, n).run(), repeat)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--n", type=int, nargs="+", default=[200, 400, 800, 1600])
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    results = {}
    for name in backends:
        with use_backend(name) as impl:
            results[name] = kernel_timings(impl, args.repeat)
            for n in args.n:
                results[name][f"ex1 solve N=50 n={n}"] = solve_timing(n, args.repeat)

    rows = list(results[backends[0]])
    width = max(map(len, rows))
    header = f"{'case':<{width}}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'speed-up':>10}"
    print(header)
    for row in rows:
        line = f"{row:<{width}}" + "".join(f"{results[b][row]:>11.4f}s" for b in backends)
        if "cython" in results and "python" in results:
            line += f"{results['python'][row] / results['cython'][row]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
