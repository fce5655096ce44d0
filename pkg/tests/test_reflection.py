import numpy as np
import pytest

from casimir import (
    Constant,
    ConstantReflection,
    Drude,
    FresnelReflection,
    ImpedanceReflection,
    LayerStack,
    MultilayerReflection,
    PerfectMirror,
    SingularKinematicsError,
    Vacuum,
    WaveKinematics,
    fresnel,
    impedance_to_reflection,
    multilayer_reflection,
    perfect_mirror,
    vacuum_impedance,
)
from casimir.constants import C_LIGHT
from casimir.reflection import (
    amplitudes_both,
    branch_sqrt,
    imag_axis_amplitudes,
    medium_normal_wavevector,
)

WP = 1.37e16
GAMMA = 5.3e13


def test_branch_sqrt_outgoing_convention():
    # Im >= 0 everywhere; Re >= 0 on the branch line
    rng = np.random.default_rng(21)
    z = rng.normal(size=300) + 1j * rng.normal(size=300)
    w = branch_sqrt(z)
    assert np.all(w.imag >= 0.0)
    np.testing.assert_allclose(w * w, z, rtol=1e-13, atol=1e-13)
    neg = branch_sqrt(np.array([-4.0]))
    assert neg[0] == pytest.approx(2j)
    pos = branch_sqrt(np.array([9.0]))
    assert pos[0] == pytest.approx(3.0)


def test_kinematics_dispersion_identity():
    rng = np.random.default_rng(2)
    for _ in range(50):
        Q = rng.uniform(0.0, 3e7)
        w = rng.uniform(1e14, 1e16)
        for freq in (w, 1j * w):
            kin = WaveKinematics.create(Q, freq)
            assert kin.q ** 2 == pytest.approx(Q ** 2 + kin.k ** 2, rel=1e-12)


def test_kinematics_imag_axis_decay_constant():
    kin = WaveKinematics.create(2e6, 1j * 1e15)
    assert kin.k.imag > 0.0 and kin.k.real == 0.0
    assert kin.kappa == pytest.approx(np.hypot(2e6, 1e15 / C_LIGHT), rel=1e-14)


def test_vacuum_impedance_rejects_grazing():
    kin = WaveKinematics.create(1e15 / C_LIGHT, 1e15)
    with pytest.raises(SingularKinematicsError):
        vacuum_impedance("s", kin)


def test_impedance_route_equals_fresnel():
    # exact agreement for any Q, including deep evanescent kinematics
    rng = np.random.default_rng(9)
    model = Drude(WP, GAMMA)
    for _ in range(200):
        w = rng.uniform(1e14, 5e16)
        Q = rng.uniform(0.0, 50.0) * w / C_LIGHT  # up to 50x the light line
        kin = WaveKinematics.create(Q, w)
        eps = model.eval(w)
        k_a = medium_normal_wavevector(eps, kin)
        for pol, Z in (("s", kin.q / k_a), ("p", k_a / (eps * kin.q))):
            direct = fresnel(model, pol, kin)
            mapped = impedance_to_reflection(Z, vacuum_impedance(pol, kin))
            assert abs(direct - mapped) < 1e-12


def test_perfect_mirror_amplitude():
    assert perfect_mirror("s") == -1.0
    assert perfect_mirror("p") == -1.0
    with pytest.raises(ValueError):
        perfect_mirror("x")


def test_fresnel_passivity_and_imag_axis_reality():
    # |r| <= 1 holds for propagating incidence; evanescent real-frequency
    # kinematics may legitimately exceed it (surface-mode region)
    rng = np.random.default_rng(17)
    model = FresnelReflection(Drude(WP, GAMMA))
    for _ in range(100):
        w = rng.uniform(1e14, 1e17)
        Q = rng.uniform(0.01, 0.95) * w / C_LIGHT
        for pol in ("s", "p"):
            assert abs(model.amplitude(pol, Q, w)) <= 1.0 + 1e-12
            r_imag = model.amplitude(pol, rng.uniform(1e4, 1e8), 1j * w)
            assert abs(np.imag(r_imag)) < 1e-12


def test_imag_axis_amplitudes_fast_path_matches_generic():
    model = FresnelReflection(Drude(WP, GAMMA))
    Q = np.geomspace(1e4, 1e8, 30)
    xi = 2e15
    rs, rp = imag_axis_amplitudes(model, xi, Q)
    rs_ref = model.amplitude("s", Q, 1j * xi)
    rp_ref = model.amplitude("p", Q, 1j * xi)
    np.testing.assert_allclose(rs, np.real(rs_ref), rtol=1e-12)
    np.testing.assert_allclose(rp, np.real(rp_ref), rtol=1e-12)


def test_amplitudes_both_matches_per_polarization():
    rng = np.random.default_rng(31)
    models = (PerfectMirror(), ConstantReflection(r_s=0.4, r_p=-0.2),
              FresnelReflection(Drude(WP, GAMMA)))
    for model in models:
        Q = rng.uniform(1e4, 1e8, 20)
        w = rng.uniform(1e14, 1e17)
        kin = WaveKinematics.create(Q, w)
        rs, rp = amplitudes_both(model, kin)
        np.testing.assert_allclose(rs, model.amplitude("s", Q, w), rtol=1e-13)
        np.testing.assert_allclose(rp, model.amplitude("p", Q, w), rtol=1e-13)


def test_normal_incidence_polarizations_coincide():
    # in this convention both amplitudes equal (1-n)/(1+n) at Q = 0, so the
    # polarizations are indistinguishable there and both tend to -1 for a mirror
    model = FresnelReflection(Constant(4.0))
    w = 1e15
    rs = model.amplitude("s", 0.0, w)
    rp = model.amplitude("p", 0.0, w)
    assert rs == pytest.approx(rp, rel=1e-12)
    assert rs == pytest.approx((1.0 - 2.0) / (1.0 + 2.0), rel=1e-12)  # (1-n)/(1+n)


def test_multilayer_zero_contrast_is_transparent():
    stack = LayerStack(layers=((1e-7, Vacuum()),), substrate=Vacuum())
    kin = WaveKinematics.create(1e6, 1e15)
    for pol in ("s", "p"):
        assert abs(multilayer_reflection(stack, pol, kin)) < 1e-14


def test_multilayer_thick_layer_equals_bulk():
    # 30 skin depths of metal over anything looks semi-infinite
    metal = Drude(WP, GAMMA)
    depth = 30.0 * C_LIGHT / WP
    stack = LayerStack(layers=((depth, metal),), substrate=Vacuum())
    model = MultilayerReflection(stack)
    bulk = FresnelReflection(metal)
    xi = 3e15
    Q = np.geomspace(1e5, 1e8, 20)
    for pol in ("s", "p"):
        got = model.amplitude(pol, Q, 1j * xi)
        want = bulk.amplitude(pol, Q, 1j * xi)
        np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-12)


def test_multilayer_mirror_substrate_at_zero_thickness_limit():
    stack = LayerStack(layers=((1e-25, Vacuum()),), substrate="mirror")
    kin = WaveKinematics.create(1e6, 1j * 1e15)
    for pol in ("s", "p"):
        assert multilayer_reflection(stack, pol, kin) == pytest.approx(-1.0, rel=1e-10)


def test_multilayer_is_real_on_imag_axis():
    stack = LayerStack(layers=((5e-8, Drude(WP, GAMMA)), (2e-8, Constant(2.25))),
                       substrate=Constant(5.0))
    model = MultilayerReflection(stack)
    rs, rp = imag_axis_amplitudes(model, 1e15, np.geomspace(1e5, 1e8, 10))
    assert np.all(np.abs(rs) <= 1.0)
    assert np.all(np.abs(rp) <= 1.0)


def test_layer_stack_validation():
    with pytest.raises(ValueError):
        LayerStack(layers=((0.0, Vacuum()),), substrate=Vacuum())
    with pytest.raises(TypeError):
        LayerStack(layers=((1e-8, "metal"),), substrate=Vacuum())
    with pytest.raises(TypeError):
        LayerStack(layers=(), substrate="gold")


def test_impedance_reflection_custom_surface():
    # a surface matching vacuum reflects nothing
    model = ImpedanceReflection(
        impedance=lambda pol, Q, freq: vacuum_impedance(
            pol, WaveKinematics.create(Q, freq)))
    assert abs(model.amplitude("s", 1e6, 1e15)) < 1e-14
