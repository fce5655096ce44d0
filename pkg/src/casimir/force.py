"""Casimir pressure between two planar slabs across a vacuum gap.

Three routes are provided:

* ``force_imag_axis`` - the reflection-amplitude formula evaluated on the
  imaginary frequency axis (primary path; smooth, positive-decaying
  integrand),
* ``force_real_axis`` - the same physics integrated literally along the
  real-frequency contour (evanescent segment k = is, s: Q -> 0, then
  propagating k: 0 -> inf); a validation path for dissipative media,
* ``lifshitz_force`` - the classical semi-infinite-slab formula in the
  (p, xi) variables, an independent oracle sharing only the quadrature
  engine with the paths above.

Sign convention everywhere: negative pressure = attraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .constants import C_LIGHT, HBAR
from .dielectric import DielectricModel
from .errors import ConvergenceError, PassivityError, ResonanceError
from .quadrature import QuadratureConfig, integrate, integrate_semi_infinite, panel_results
from .reflection import (
    ReflectionModel,
    WaveKinematics,
    amplitudes_both,
    imag_axis_amplitudes,
)

_PASSIVITY_SLACK = 1e-9


@dataclass(frozen=True)
class ForceResult:
    """Pressure in Pa (negative = attractive) plus bookkeeping."""

    pressure: float
    error: float
    reduction: float
    neval: int
    path: str
    converged: bool = True


def ideal_casimir_pressure(L: float) -> float:
    """Perfect-mirror pressure -pi^2 hbar c / (240 L^4)."""
    if L <= 0.0:
        raise ValueError(f"gap width must be positive, got {L}")
    return -math.pi ** 2 * HBAR * C_LIGHT / (240.0 * L ** 4)


def reduction_factor(result: ForceResult, L: float) -> float:
    """Computed pressure over the ideal-mirror pressure at the same gap."""
    return result.pressure / ideal_casimir_pressure(L)


def _check_passive(prod, what):
    m = float(np.max(np.abs(prod))) if np.size(prod) else 0.0
    if m > 1.0 + _PASSIVITY_SLACK:
        raise PassivityError(f"|r1 r2| = {m} >= 1 on the {what} grid (active medium)")


class _InnerScale:
    """Running magnitude of the inner integrals, used as an absolute floor
    so the outer tails are not resolved to pointless relative precision."""

    def __init__(self):
        self.value = 0.0

    def update(self, v):
        self.value = max(self.value, abs(v))


def _double_integral(outer_integrand, cfg, outer_scale=1.0):
    """Outer semi-infinite integral whose integrand runs an inner quadrature.

    ``outer_integrand(u, inner_cfg) -> (value, error)``.  Returns
    (value, error, converged) with inner errors folded into the estimate.
    """
    # inner integrals run on relative tolerance alone: an absolute floor in
    # the untransformed variable would be amplified by the transform
    # jacobian wherever the outer integrand decays only algebraically
    inner_cfg = replace(cfg, rtol=max(0.1 * cfg.rtol, 2e-14))
    inner_rel = [0.0]
    converged = [True]

    def f(us):
        out = np.empty_like(us)
        for i, u in enumerate(us):
            try:
                v, e = outer_integrand(float(u), inner_cfg)
            except ConvergenceError as exc:
                converged[0] = False
                v, e = exc.value, exc.error
            if v != 0.0:
                inner_rel[0] = max(inner_rel[0], e / abs(v))
            out[i] = v
        return out

    try:
        val, err = integrate_semi_infinite(f, 0.0, cfg, scale=outer_scale)
    except ConvergenceError as exc:
        val, err = exc.value, exc.error
        converged[0] = False
    err_total = err + inner_rel[0] * abs(val)
    return val, err_total, converged[0]


def force_imag_axis(r1: ReflectionModel, r2: ReflectionModel, L: float,
                    cfg: QuadratureConfig | None = None) -> ForceResult:
    """Pressure from the rotated (imaginary-frequency) reflection formula.

    P = -(hbar / 2 pi^2) Int dxi Int dQ Q kappa
        Sum_pol r1 r2 e^{-2 kappa L} / (1 - r1 r2 e^{-2 kappa L}),
    nondimensionalized with u = xi L / c and v = Q L.
    """
    if L <= 0.0:
        raise ValueError(f"gap width must be positive, got {L}")
    cfg = cfg or QuadratureConfig()
    neval = [0]

    def inner(u, cfg_u):
        xi = u * C_LIGHT / L

        def g(v):
            Q = v / L
            rs1, rp1 = imag_axis_amplitudes(r1, xi, Q)
            rs2, rp2 = imag_axis_amplitudes(r2, xi, Q)
            prod_s = rs1 * rs2
            prod_p = rp1 * rp2
            _check_passive(prod_s, "(xi, Q)")
            _check_passive(prod_p, "(xi, Q)")
            neval[0] += v.size
            return kernels.force_integrand_iw(u, v, prod_s, prod_p)

        return integrate_semi_infinite(g, 0.0, cfg_u, scale=1.0 + math.sqrt(u))

    val, err, ok = _double_integral(inner, cfg)
    pref = HBAR * C_LIGHT / (2.0 * math.pi ** 2 * L ** 4)
    pressure = -pref * val
    error = pref * err
    if error > abs(pressure) * cfg.rtol * 10.0 and pressure != 0.0:
        ok = False
    res = ForceResult(pressure=pressure, error=error, reduction=0.0,
                      neval=neval[0], path="imaginary-axis", converged=ok)
    return replace(res, reduction=reduction_factor(res, L))


def lifshitz_force(eps1: DielectricModel, eps2: DielectricModel,
                   eps3: DielectricModel, L: float,
                   cfg: QuadratureConfig | None = None) -> ForceResult:
    """Semi-infinite-slab pressure in the classical (p, xi) variables.

    P = -(hbar / 2 pi^2 c^3) Int_1^inf dp p^2 Int_0^inf dxi xi^3 eps3^{3/2}
        [G1^{-1} + G2^{-1}], evaluated in an overflow-free form.  Supports
    a material-filled gap (eps3 != 1), unlike the reflection-driven paths.
    """
    if L <= 0.0:
        raise ValueError(f"gap width must be positive, got {L}")
    cfg = cfg or QuadratureConfig()
    for name, model in (("eps1", eps1), ("eps2", eps2), ("eps3", eps3)):
        probe = model.eval_iw(np.array([1e12, 1e15, 1e18]))
        if np.any(np.asarray(probe) < 1.0 - 1e-12):
            raise ValueError(f"{name} must be real >= 1 on the imaginary axis")
    neval = [0]
    L_over_c = L / C_LIGHT

    def inner(t, cfg_t):
        p = 1.0 + t

        def g(xi):
            e1 = np.asarray(eps1.eval_iw(xi), dtype=float)
            e2 = np.asarray(eps2.eval_iw(xi), dtype=float)
            e3 = np.asarray(eps3.eval_iw(xi), dtype=float)
            neval[0] += xi.size
            return kernels.lifshitz_inner(xi, p, e1, e2, e3, L_over_c)

        # decay scale of e^{-2 xi p sqrt(eps3) L/c} in xi
        return integrate_semi_infinite(g, 0.0, cfg_t, scale=C_LIGHT / (p * L))

    # p = 1 + t, p^2 dp weight absorbed in the integrand
    def outer(t, cfg_t):
        v, e = inner(t, cfg_t)
        return (1.0 + t) ** 2 * v, (1.0 + t) ** 2 * e

    val, err, ok = _double_integral(outer, cfg)
    pref = HBAR / (2.0 * math.pi ** 2 * C_LIGHT ** 3)
    # the xi-integral carries dimensions rad^4/s^4; val is already in SI
    pressure = -pref * val
    error = pref * err
    if error > abs(pressure) * cfg.rtol * 10.0 and pressure != 0.0:
        ok = False
    res = ForceResult(pressure=pressure, error=error, reduction=0.0,
                      neval=neval[0], path="lifshitz", converged=ok)
    return replace(res, reduction=reduction_factor(res, L))


def _round_trips(r1, r2, kin, phase):
    """Polarization-summed g/(1-g) with g = r1 r2 * phase at shared kinematics."""
    rs1, rp1 = amplitudes_both(r1, kin)
    rs2, rp2 = amplitudes_both(r2, kin)
    out = 0.0
    for g in (rs1 * rs2 * phase, rp1 * rp2 * phase):
        den = 1.0 - g
        if np.any(np.abs(den) < 1e-12):
            raise ResonanceError(
                "resonance pole on the real-frequency contour; add dissipation "
                "or use the imaginary-axis path")
        out = out + g / den
    return out


def force_real_axis(r1: ReflectionModel, r2: ReflectionModel, L: float,
                    cfg: QuadratureConfig | None = None) -> ForceResult:
    """Pressure from the literal real-frequency contour.

    For each Q the k-integral runs from iQ to 0 (evanescent segment,
    parametrized k = i Q sin(phi) so the q = sqrt(Q^2 - s^2) endpoint
    singularity drops out) and then 0 -> infinity (propagating segment,
    truncated octave by octave once the oscillatory tail stops
    contributing).  Practical accuracy is limited; intended as the
    contour-equivalence validation for dissipative models.
    """
    if L <= 0.0:
        raise ValueError(f"gap width must be positive, got {L}")
    cfg = cfg or QuadratureConfig()
    target = max(cfg.rtol, 1e-6)
    neval = [0]
    seg_cfg = QuadratureConfig(rtol=max(target * 0.1, 1e-10), atol=0.0,
                               max_subdivisions=cfg.max_subdivisions,
                               tail_check="none")

    def evanescent(Qp):
        # -Int_0^Q ds s^2/q Im B  ->  -Int_0^{pi/2} dphi Q'^2 sin^2 phi Im B
        def g(phi):
            s = Qp * np.sin(phi)
            q = Qp * np.cos(phi)
            omega = (C_LIGHT / L) * q
            phase = np.exp(-2.0 * s)  # e^{2 i k L} with k = i s/L
            kin = WaveKinematics.create(Qp / L, omega)
            b = _round_trips(r1, r2, kin, phase)
            neval[0] += phi.size
            return -(Qp * np.sin(phi)) ** 2 * b.imag

        val, err = integrate(g, 0.0, 0.5 * np.pi, seg_cfg)
        return val, err

    def prop_piece(Qp, k_lo, k_hi, piece_cfg):
        def g(kp):
            q = np.sqrt(Qp * Qp + kp * kp)
            omega = (C_LIGHT / L) * q
            phase = np.exp(2j * kp)
            kin = WaveKinematics.create(Qp / L, omega)
            b = _round_trips(r1, r2, kin, phase)
            neval[0] += kp.size
            return (kp * kp / q) * b.real

        return integrate(g, k_lo, k_hi, piece_cfg)

    def envelope(Qp, k_lo, k_hi):
        """Bound on |integral| of one oscillatory chunk, from the slowly
        varying round-trip amplitude alone (integration by parts in the
        e^{2ik} phase).  Returns inf when the bound is not usable."""
        kp = np.array([k_lo, math.sqrt(k_lo * k_hi), k_hi])
        q = np.sqrt(Qp * Qp + kp * kp)
        kin = WaveKinematics.create(Qp / L, (C_LIGHT / L) * q)
        rs1, rp1 = amplitudes_both(r1, kin)
        rs2, rp2 = amplitudes_both(r2, kin)
        rho = np.abs(rs1 * rs2) + np.abs(rp1 * rp2)
        if np.any(rho > 0.5):
            return math.inf
        return float(np.max((kp * kp / q) * rho / (1.0 - rho)))

    def inner(Qp, cfg_u):
        # the propagating bulk and tail cancel almost completely at large
        # Q'; every segment therefore runs on an absolute tolerance tied to
        # the running magnitude of the inner integrals (cfg_u.atol), never
        # on a tolerance relative to its own (possibly huge) value
        ev_val, ev_err = evanescent(Qp)
        k0 = max(4.0 * Qp, 8.0)
        if cfg_u.atol > 0.0:
            floor = cfg_u.atol
        else:  # bootstrap call: rough pass sets the local magnitude
            rough, _ = prop_piece(Qp, 0.0, k0, replace(seg_cfg, rtol=1e-3))
            floor = (abs(rough) + abs(ev_val)) * target * 0.05
        abs_cfg = replace(seg_cfg, atol=floor, rtol=1e-5,
                          max_subdivisions=min(cfg.max_subdivisions, 1200))
        try:
            total, err = prop_piece(Qp, 0.0, k0, abs_cfg)
        except ConvergenceError as exc:
            total, err = exc.value, exc.error
        k = k0
        chunks = []
        tail_bound = 0.0
        prev_bound = math.inf
        for _ in range(24):
            bound = envelope(Qp, k, 2.0 * k)
            if bound < floor:
                # remaining octaves bounded by a ~1/k^2 geometric envelope
                tail_bound = 1.5 * bound
                break
            if len(chunks) >= 3 and bound > floor and not bound < prev_bound:
                # non-decaying round trip (e.g. constant r): the oscillatory
                # tail is at best Abel-summable, never absolutely convergent
                raise ConvergenceError(
                    "propagating-tail contributions stopped decaying; the "
                    "real-frequency contour does not converge for this model",
                    value=total + ev_val, error=err + ev_err + bound,
                    partial_sums=chunks)
            prev_bound = bound
            # atol only: individual octaves are O(1) and cancel in the sum,
            # so a relative exit criterion would leave errors far above floor
            oc_cfg = replace(abs_cfg, atol=0.25 * floor, rtol=1e-10)
            try:
                v, e = prop_piece(Qp, k, 2.0 * k, oc_cfg)
            except ConvergenceError as exc:
                v, e = exc.value, exc.error
            total += v
            err += e
            chunks.append(v)
            k *= 2.0
        else:
            raise ConvergenceError(
                "oscillatory propagating tail did not settle within 24 octaves",
                value=total + ev_val, error=err + ev_err + abs(chunks[-1]),
                partial_sums=chunks)
        return total + ev_val, err + ev_err + tail_bound

    outer_cfg = replace(cfg, rtol=target, tail_check="none")
    scale = _InnerScale()
    inner_rel = [0.0]
    converged = [True]

    def f(us):
        out = np.empty_like(us)
        for i, u in enumerate(us):
            floor = scale.value * target * 0.3
            try:
                v, e = inner(float(u), replace(outer_cfg, atol=floor))
            except ConvergenceError as exc:
                converged[0] = False
                v, e = exc.value, exc.error
            scale.update(v)
            if scale.value > 0.0:
                inner_rel[0] = max(inner_rel[0], e / scale.value)
            out[i] = u * v
        return out

    # seed the running magnitude near the peak so every later inner
    # integral gets a meaningful absolute floor; a failure here means the
    # whole contour is hopeless, so it propagates to the caller
    v0, _ = inner(1.0, replace(outer_cfg, atol=0.0))
    scale.update(v0)

    # fixed coarse grid in Q' plus a few bounded refinement rounds; a fully
    # adaptive outer loop would chase the noise floor of the inner integrals
    q_max = max(8.0, 0.5 * math.log(10.0 / target))
    edges = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, q_max])
    vals, errs = panel_results(f, edges)
    panels = [[edges[i], edges[i + 1], vals[i], errs[i]] for i in range(vals.size)]
    for _ in range(4):
        val = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        if err <= target * abs(val):
            break
        # bisect the worst few panels only
        panels.sort(key=lambda p: -p[3])
        refined = []
        for lo, hi, _, _ in panels[:6]:
            mid = 0.5 * (lo + hi)
            v2, e2 = panel_results(f, np.array([lo, mid, hi]))
            refined.append([lo, mid, v2[0], e2[0]])
            refined.append([mid, hi, v2[1], e2[1]])
        panels = refined + panels[6:]
    panels.sort(key=lambda p: p[0])
    val = float(sum(p[2] for p in panels))
    err = float(sum(p[3] for p in panels))

    pref = HBAR * C_LIGHT / (2.0 * math.pi ** 2 * L ** 4)
    pressure = pref * val
    error = pref * (err + inner_rel[0] * abs(val))
    if pressure != 0.0 and error > abs(pressure) * cfg.rtol * 10.0:
        converged[0] = False
    res = ForceResult(pressure=pressure, error=error, reduction=0.0,
                      neval=neval[0], path="real-axis", converged=converged[0])
    return replace(res, reduction=reduction_factor(res, L))
