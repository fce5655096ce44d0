import numpy as np
import pytest

from casimir import (
    Constant,
    ConstantReflection,
    ConvergenceError,
    Drude,
    FresnelReflection,
    LayerStack,
    MultilayerReflection,
    PassivityError,
    PerfectMirror,
    Plasma,
    QuadratureConfig,
    Vacuum,
    force_imag_axis,
    force_real_axis,
    ideal_casimir_pressure,
    lifshitz_force,
    reduction_factor,
)
from casimir.constants import C_LIGHT, HBAR

WP = 1.37e16
GAMMA = 5.3e13
CFG = QuadratureConfig(rtol=1e-9)


def test_ideal_pressure_value():
    # -pi^2 hbar c / 240 at L = 1 um, about -1.3 mPa
    assert ideal_casimir_pressure(1e-6) == pytest.approx(
        -np.pi ** 2 * HBAR * C_LIGHT / 240.0 * 1e24, rel=1e-15)
    with pytest.raises(ValueError):
        ideal_casimir_pressure(0.0)


def test_mirrors_recover_ideal_result():
    m = PerfectMirror()
    for L in (1e-8, 1e-6):
        res = force_imag_axis(m, m, L, CFG)
        assert res.pressure == pytest.approx(ideal_casimir_pressure(L), rel=1e-8)
        assert res.converged
        assert res.reduction == pytest.approx(1.0, rel=1e-8)
        assert res.path == "imaginary-axis"


def test_pressure_is_attractive_and_scales_down_with_material():
    m = FresnelReflection(Drude(WP, GAMMA))
    res = force_imag_axis(m, m, 100e-9, CFG)
    assert res.pressure < 0.0
    assert 0.0 < res.reduction < 1.0


def test_error_estimate_is_honest_for_mirrors():
    m = PerfectMirror()
    res = force_imag_axis(m, m, 1e-6, CFG)
    assert abs(res.pressure - ideal_casimir_pressure(1e-6)) <= 10.0 * res.error


def test_mixed_mirror_and_metal():
    mirror = PerfectMirror()
    metal = FresnelReflection(Drude(WP, GAMMA))
    both_metal = force_imag_axis(metal, metal, 200e-9, CFG).pressure
    mixed = force_imag_axis(mirror, metal, 200e-9, CFG).pressure
    ideal = ideal_casimir_pressure(200e-9)
    # mixed cavity must sit between metal-metal and mirror-mirror
    assert abs(both_metal) < abs(mixed) < abs(ideal)


def test_lifshitz_equivalence_constant_eps():
    eps = Constant(2.0)
    m = FresnelReflection(eps)
    for L in (50e-9, 1e-6):
        a = force_imag_axis(m, m, L, CFG).pressure
        b = lifshitz_force(eps, eps, Vacuum(), L, CFG).pressure
        assert a == pytest.approx(b, rel=1e-10)


def test_lifshitz_equivalence_drude():
    dr = Drude(WP, 5e13)
    m = FresnelReflection(dr)
    L = 200e-9
    a = force_imag_axis(m, m, L, CFG).pressure
    b = lifshitz_force(dr, dr, Vacuum(), L, CFG).pressure
    assert a == pytest.approx(b, rel=1e-10)


def test_lifshitz_asymmetric_slabs():
    e1, e2 = Constant(3.0), Constant(1.5)
    a = force_imag_axis(FresnelReflection(e1), FresnelReflection(e2), 300e-9, CFG)
    b = lifshitz_force(e1, e2, Vacuum(), 300e-9, CFG)
    assert a.pressure == pytest.approx(b.pressure, rel=1e-10)


def test_lifshitz_filled_gap_is_weaker():
    # an eps3 > 1 gap screens the interaction at fixed L
    e = Constant(4.0)
    empty = lifshitz_force(e, e, Vacuum(), 200e-9, CFG).pressure
    filled = lifshitz_force(e, e, Constant(2.0), 200e-9, CFG).pressure
    assert abs(filled) < abs(empty)
    assert filled < 0.0


def test_reduction_factor_consistency():
    m = FresnelReflection(Plasma(WP))
    res = force_imag_axis(m, m, 1e-6, CFG)
    assert res.reduction == pytest.approx(reduction_factor(res, 1e-6), rel=1e-15)


def test_pressure_magnitude_decreases_with_separation():
    m = FresnelReflection(Drude(WP, GAMMA))
    Ls = np.geomspace(1e-8, 1e-5, 8)
    ps = [abs(force_imag_axis(m, m, L, QuadratureConfig(rtol=1e-7)).pressure)
          for L in Ls]
    assert all(a > b for a, b in zip(ps, ps[1:]))


def test_active_amplitudes_rejected():
    hot = ConstantReflection(r_s=1.2, r_p=0.0)
    with pytest.raises(PassivityError):
        force_imag_axis(hot, hot, 1e-6, CFG)


def test_constant_amplitude_cavity_matches_closed_form():
    # for r1 r2 = rho constant, P = -(hbar c / 2 pi^2 L^4) * 3 Li_4(rho) / 4
    # per polarization; rho = 0.25 keeps the series fast and exact
    rho = 0.25
    m = ConstantReflection(r_s=0.5, r_p=0.5)
    res = force_imag_axis(m, m, 1e-6, CFG)
    li4 = sum(rho ** n / n ** 4 for n in range(1, 60))
    want = -HBAR * C_LIGHT / (2.0 * np.pi ** 2 * 1e-24) * 2.0 * (3.0 / 8.0) * li4
    assert res.pressure == pytest.approx(want, rel=1e-8)


def test_real_axis_contour_matches_imag_axis_for_lossy_metal():
    dr = Drude(1e16, 1e14)
    m = FresnelReflection(dr)
    L = 500e-9
    ref = force_imag_axis(m, m, L, QuadratureConfig(rtol=1e-9)).pressure
    res = force_real_axis(m, m, L, QuadratureConfig(rtol=1e-3))
    assert res.path == "real-axis"
    assert res.converged
    assert res.pressure == pytest.approx(ref, rel=1e-3)


def test_real_axis_rejects_nondecaying_round_trip():
    # constant reflection never decays along the real axis: only Abel
    # summable, so the literal contour must refuse with partial sums
    m = ConstantReflection(r_s=0.5, r_p=0.5)
    with pytest.raises(ConvergenceError) as exc_info:
        force_real_axis(m, m, 1e-6, QuadratureConfig(rtol=1e-3))
    err = exc_info.value
    assert len(err.partial_sums) >= 3
    assert np.isfinite(err.value)


def test_multilayer_force_between_bulk_limits():
    # a thin metal film sits between transparent and bulk-metal behavior
    metal = Drude(WP, GAMMA)
    mirror = PerfectMirror()
    L = 200e-9
    bulk = abs(force_imag_axis(FresnelReflection(metal), mirror, L, CFG).pressure)
    film = MultilayerReflection(
        LayerStack(layers=((5e-9, metal),), substrate=Vacuum()))
    thin = abs(force_imag_axis(film, mirror, L, CFG).pressure)
    assert 0.0 < thin < bulk


def test_gap_width_validation():
    m = PerfectMirror()
    with pytest.raises(ValueError):
        force_imag_axis(m, m, -1e-6, CFG)
    with pytest.raises(ValueError):
        lifshitz_force(Constant(2.0), Constant(2.0), Vacuum(), 0.0, CFG)


def test_imag_axis_results_are_deterministic():
    m = FresnelReflection(Drude(WP, GAMMA))
    vals = {force_imag_axis(m, m, 1e-7, QuadratureConfig(rtol=1e-8)).pressure
            for _ in range(3)}
    assert len(vals) == 1
