"""Hot numeric kernels for the pressure and permittivity integrands.

Every function here is compiled with numba's ``@njit`` when numba is
importable.  Setting the environment variable ``CASIMIR_PURE_NUMPY=1``
before import selects the pure-numpy fallback path (identical source,
no JIT), which is also what runs when numba is absent.  The benchmark in
``benchmarks/bench_kernels.py`` compares both paths.

All kernels work on float64 scalars or arrays; nothing here touches
complex numbers (the imaginary-axis quantities they evaluate are real).
"""

import os

import numpy as np

PURE_NUMPY = os.environ.get("CASIMIR_PURE_NUMPY", "0").lower() in ("1", "true", "yes")

NUMBA_ENABLED = False
if not PURE_NUMPY:
    try:
        from numba import njit as _njit
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if NUMBA_ENABLED:
    def _jit(func):
        return _njit(cache=True)(func)
else:
    def _jit(func):
        return func


@_jit
def plasma_eps_iw(xi, omega_p):
    return 1.0 + (omega_p / xi) ** 2


@_jit
def drude_eps_iw(xi, omega_p, gamma):
    return 1.0 + omega_p * omega_p / (xi * (xi + gamma))


@_jit
def fresnel_rs_rp_iw(eps, xi_over_c, Q):
    """Fresnel amplitudes on the imaginary frequency axis.

    ``eps`` is the (real) permittivity at i*xi, ``xi_over_c = xi/c`` and
    ``Q`` the parallel wavevector.  Returns ``(r_s, r_p)`` in the
    convention r_p = (k_a - eps k)/(k_a + eps k).
    """
    kap = np.sqrt(Q * Q + xi_over_c * xi_over_c)
    kap_a = np.sqrt(Q * Q + eps * xi_over_c * xi_over_c)
    rs = (kap - kap_a) / (kap + kap_a)
    rp = (kap_a - eps * kap) / (kap_a + eps * kap)
    return rs, rp


@_jit
def exchange_term(prod, w):
    """Round-trip factor prod*e^{-2w} / (1 - prod*e^{-2w}).

    ``prod`` is the product of the two reflection amplitudes at imaginary
    frequency and ``w`` the (dimensionless) decay exponent kappa*L.
    Well-behaved for prod == 1 as long as w > 0.
    """
    g = prod * np.exp(-2.0 * w)
    return g / (1.0 - g)


@_jit
def force_integrand_iw(u, v, prod_s, prod_p):
    """Imaginary-axis pressure integrand, nondimensionalized by the gap L.

    ``u = xi L / c`` (scalar), ``v = Q L`` (array), ``prod_*`` the
    polarization-resolved products r1*r2 evaluated at (u, v).
    """
    w = np.sqrt(u * u + v * v)
    gs = prod_s * np.exp(-2.0 * w)
    gp = prod_p * np.exp(-2.0 * w)
    return v * w * (gs / (1.0 - gs) + gp / (1.0 - gp))


@_jit
def lifshitz_inner(xi, p, e1, e2, e3, L_over_c):
    """Inner (xi) integrand of the semi-infinite-slab pressure formula.

    Independent of the reflection-model machinery: builds its own
    s-variables s_a = sqrt(p^2 - 1 + e_a/e3) and evaluates the two
    polarization channels in an overflow-free reciprocal form.
    """
    s1 = np.sqrt(p * p - 1.0 + e1 / e3)
    s2 = np.sqrt(p * p - 1.0 + e2 / e3)
    x = xi * p * np.sqrt(e3) * L_over_c
    ex = np.exp(-2.0 * x)
    b1p = (e3 * s1 - e1 * p) / (e3 * s1 + e1 * p)
    b2p = (e3 * s2 - e2 * p) / (e3 * s2 + e2 * p)
    b1s = (s1 - p) / (s1 + p)
    b2s = (s2 - p) / (s2 + p)
    g1 = b1p * b2p * ex
    g2 = b1s * b2s * ex
    return xi ** 3 * e3 ** 1.5 * (g1 / (1.0 - g1) + g2 / (1.0 - g2))


def python_impl(func):
    """Return the uncompiled twin of a kernel (the function itself when
    running in pure-numpy mode)."""
    return getattr(func, "py_func", func)
