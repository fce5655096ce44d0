"""Compare compiled kernels against their pure-python/numpy twins.

Run from the repository root::

    python3 benchmarks/bench_kernels.py

The same functions can be forced into the numpy fallback for the whole
package by setting CASIMIR_PURE_NUMPY=1 before import.
"""

import time

import numpy as np

from casimir import kernels

N_POINTS = 4096
REPEATS = 200
rng = np.random.default_rng(1234)


def timeit(fn, *args):
    fn(*args)  # warm (trigger compilation where applicable)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(REPEATS):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / REPEATS)
    return best


def main():
    Q = rng.uniform(1e4, 1e8, N_POINTS)
    u = 1.3
    v = rng.uniform(0.01, 10.0, N_POINTS)
    prod = rng.uniform(0.0, 0.99, N_POINTS)

    cases = [
        ("plasma_eps_iw", kernels.plasma_eps_iw, (rng.uniform(1e13, 1e16, N_POINTS), 1.37e16)),
        ("drude_eps_iw", kernels.drude_eps_iw, (rng.uniform(1e13, 1e16, N_POINTS), 1.37e16, 5.3e13)),
        ("fresnel_rs_rp_iw", kernels.fresnel_rs_rp_iw, (4.2, 1e6, Q)),
        ("force_integrand_iw", kernels.force_integrand_iw, (u, v, prod, prod)),
        ("lifshitz_inner", kernels.lifshitz_inner,
         (rng.uniform(1e14, 1e16, N_POINTS), 1.7, 4.0, 4.0, 1.0, 5e-7 / 2.99792458e8)),
    ]

    mode = "pure-numpy (CASIMIR_PURE_NUMPY=1)" if kernels.PURE_NUMPY else "numba"
    print(f"active kernel mode: {mode}; {N_POINTS} points per call\n")
    print(f"{'kernel':<22}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for name, fn, args in cases:
        t_fast = timeit(fn, *args)
        t_py = timeit(kernels.python_impl(fn), *args)
        print(f"{name:<22}{t_fast * 1e6:>10.1f}us{t_py * 1e6:>10.1f}us"
              f"{t_py / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
