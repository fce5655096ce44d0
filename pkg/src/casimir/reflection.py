"""Reflection amplitudes of a slab seen from vacuum.

Everything is driven by the exact impedance-to-reflection mapping
r = (Z - Z0)/(Z + Z0); Fresnel amplitudes, multilayer stacks and ideal
mirrors are special cases of it.  Amplitudes are real on the imaginary
frequency axis for every physical variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .constants import C_LIGHT
from .dielectric import DielectricModel, Tabulated, _check_frequency
from .errors import ResonanceError, SingularKinematicsError


def branch_sqrt(z):
    """Complex sqrt with Im >= 0, and Re >= 0 on the real branch line.

    This is the outgoing-wave branch: e^{ikz} propagates or decays as z
    increases.
    """
    w = np.sqrt(np.asarray(z, dtype=complex))
    w = np.where(w.imag < 0.0, -w, w)
    return np.where((w.imag == 0.0) & (w.real < 0.0), -w, w)


@dataclass(frozen=True)
class WaveKinematics:
    """Vacuum wave kinematics at parallel wavevector Q and frequency freq.

    ``q = freq/c`` so that q^2 = Q^2 + k^2 holds exactly on both frequency
    axes; on the imaginary axis k = i*kappa with kappa real.
    """

    Q: np.ndarray
    freq: complex
    q: np.ndarray
    k: np.ndarray

    @classmethod
    def create(cls, Q, freq):
        _check_frequency(freq)
        Q = np.asarray(Q, dtype=float)
        if np.any(Q < 0.0):
            raise ValueError("Q must be >= 0")
        q = np.asarray(freq, dtype=complex) / C_LIGHT
        k = branch_sqrt(q * q - Q * Q)
        return cls(Q=Q, freq=freq, q=q, k=k)

    @property
    def kappa(self):
        """Imaginary-axis decay constant, kappa = sqrt(Q^2 + xi^2/c^2)."""
        return np.abs(self.k)


def vacuum_impedance(pol: str, kin: WaveKinematics):
    """Surface impedance of vacuum: q/k for s, k/q for p."""
    if np.any(kin.k == 0.0):
        raise SingularKinematicsError(
            "grazing kinematics k = 0 (Q = omega/c); integration grids must "
            "not sample this point")
    if pol == "s":
        return kin.q / kin.k
    if pol == "p":
        return kin.k / kin.q
    raise ValueError(f"polarization must be 's' or 'p', got {pol!r}")


def impedance_to_reflection(Z, Z0):
    """Exact mapping r = (Z - Z0)/(Z + Z0)."""
    Z = np.asarray(Z, dtype=complex)
    Z0 = np.asarray(Z0, dtype=complex)
    den = Z + Z0
    if np.any(np.abs(den) <= 1e-14 * (np.abs(Z) + np.abs(Z0))):
        raise ResonanceError("impedance pole Z = -Z0")
    return (Z - Z0) / den


def medium_normal_wavevector(eps, kin: WaveKinematics):
    """k_a = sqrt(eps q^2 - Q^2) with the outgoing branch."""
    return branch_sqrt(eps * kin.q * kin.q - kin.Q * kin.Q)


def fresnel(model: DielectricModel, pol: str, kin: WaveKinematics):
    """Fresnel amplitude of a semi-infinite medium.

    r_s = (k - k_a)/(k + k_a), r_p = (k_a - eps k)/(k_a + eps k); equal to
    the impedance route with Z_a^s = q/k_a, Z_a^p = k_a/(eps q).
    """
    eps = model.eval(kin.freq)
    k_a = medium_normal_wavevector(eps, kin)
    if np.any(k_a == 0.0):
        raise SingularKinematicsError("branch-cut-ambiguous kinematics k_a = 0")
    if pol == "s":
        return (kin.k - k_a) / (kin.k + k_a)
    if pol == "p":
        return (k_a - eps * kin.k) / (k_a + eps * kin.k)
    raise ValueError(f"polarization must be 's' or 'p', got {pol!r}")


def perfect_mirror(pol: str):
    """Ideal-mirror limit (eps -> infinity) of the Fresnel amplitudes."""
    if pol not in ("s", "p"):
        raise ValueError(f"polarization must be 's' or 'p', got {pol!r}")
    return -1.0 + 0.0j


MIRROR = "mirror"


@dataclass(frozen=True)
class LayerStack:
    """Finite layers over a substrate, ordered from the vacuum side inward.

    ``layers`` is a tuple of (thickness_m, DielectricModel); ``substrate``
    is a DielectricModel or the string ``"mirror"``.
    """

    layers: tuple
    substrate: object

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        for d, medium in self.layers:
            if not (d > 0.0 and np.isfinite(d)):
                raise ValueError(f"layer thickness must be positive and finite, got {d}")
            if not isinstance(medium, DielectricModel):
                raise TypeError("layer medium must be a DielectricModel")
        if self.substrate != MIRROR and not isinstance(self.substrate, DielectricModel):
            raise TypeError("substrate must be a DielectricModel or 'mirror'")


def _characteristic_impedance(eps, pol, kin):
    k_a = medium_normal_wavevector(eps, kin)
    if pol == "s":
        return kin.q / k_a, k_a
    return k_a / (eps * kin.q), k_a


def multilayer_reflection(stack: LayerStack, pol: str, kin: WaveKinematics):
    """Stack reflection via surface-impedance recursion from the substrate out.

    Impedances stay bounded where transfer-matrix entries would overflow
    for thick absorbing layers.
    """
    if pol not in ("s", "p"):
        raise ValueError(f"polarization must be 's' or 'p', got {pol!r}")
    if stack.substrate == MIRROR:
        Z = np.zeros_like(kin.q)
    else:
        eps_sub = stack.substrate.eval(kin.freq)
        Z, _ = _characteristic_impedance(eps_sub, pol, kin)
    for d, medium in reversed(stack.layers):
        eps = medium.eval(kin.freq)
        Zc, k_a = _characteristic_impedance(eps, pol, kin)
        r_inner = impedance_to_reflection(Z, Zc)
        phase = np.exp(2j * k_a * d)
        den = 1.0 - r_inner * phase
        if np.any(np.abs(den) <= 1e-14):
            raise ResonanceError("stack resonance (impedance recursion pole)")
        Z = Zc * (1.0 + r_inner * phase) / den
    return impedance_to_reflection(Z, vacuum_impedance(pol, kin))


class ReflectionModel:
    """Maps (polarization, Q, frequency) to a complex reflection amplitude.

    Instances are immutable; ``amplitude`` is pure and broadcasts over
    ndarray ``Q``/``freq``.
    """

    def amplitude(self, pol, Q, freq):
        raise NotImplementedError


@dataclass(frozen=True)
class PerfectMirror(ReflectionModel):
    def amplitude(self, pol, Q, freq):
        kin = WaveKinematics.create(Q, freq)
        return np.broadcast_to(perfect_mirror(pol), np.broadcast(kin.Q, kin.q).shape).copy()


@dataclass(frozen=True)
class ConstantReflection(ReflectionModel):
    """Scripted fixed amplitude per polarization (not necessarily physical)."""

    r_s: complex
    r_p: complex

    def amplitude(self, pol, Q, freq):
        kin = WaveKinematics.create(Q, freq)
        r = self.r_s if pol == "s" else self.r_p
        return np.broadcast_to(complex(r), np.broadcast(kin.Q, kin.q).shape).copy()


@dataclass(frozen=True)
class FresnelReflection(ReflectionModel):
    dielectric: DielectricModel

    def amplitude(self, pol, Q, freq):
        return fresnel(self.dielectric, pol, WaveKinematics.create(Q, freq))


@dataclass(frozen=True)
class ImpedanceReflection(ReflectionModel):
    """Surface-impedance-defined slab: Z(pol, Q, freq) -> complex.

    Extension hook for nonlocal media; the supplied callable must be pure
    and should broadcast over Q.
    """

    impedance: Callable

    def amplitude(self, pol, Q, freq):
        kin = WaveKinematics.create(Q, freq)
        return impedance_to_reflection(self.impedance(pol, kin.Q, kin.freq),
                                       vacuum_impedance(pol, kin))


@dataclass(frozen=True)
class MultilayerReflection(ReflectionModel):
    stack: LayerStack

    def amplitude(self, pol, Q, freq):
        return multilayer_reflection(self.stack, pol, WaveKinematics.create(Q, freq))


def amplitudes_both(model: ReflectionModel, kin: WaveKinematics):
    """(r_s, r_p) at shared kinematics, with one dielectric evaluation.

    Fast path for the contour integrals, where the per-call overhead of
    building kinematics four times per point dominates.
    """
    if isinstance(model, PerfectMirror):
        r = np.broadcast_to(-1.0 + 0.0j, np.broadcast(kin.Q, kin.q).shape)
        return r, r
    if isinstance(model, ConstantReflection):
        shape = np.broadcast(kin.Q, kin.q).shape
        return (np.broadcast_to(complex(model.r_s), shape),
                np.broadcast_to(complex(model.r_p), shape))
    if isinstance(model, FresnelReflection):
        eps = model.dielectric.eval(kin.freq)
        k_a = medium_normal_wavevector(eps, kin)
        if np.any(k_a == 0.0):
            raise SingularKinematicsError("branch-cut-ambiguous kinematics k_a = 0")
        return ((kin.k - k_a) / (kin.k + k_a),
                (k_a - eps * kin.k) / (k_a + eps * kin.k))
    return (np.asarray(model.amplitude("s", kin.Q, kin.freq), dtype=complex),
            np.asarray(model.amplitude("p", kin.Q, kin.freq), dtype=complex))


_IMAG_TOL = 1e-9


def imag_axis_amplitudes(model: ReflectionModel, xi: float, Q):
    """(r_s, r_p) as real float arrays at freq = i*xi.

    Uses the compiled Fresnel kernel for analytic dielectric variants and
    falls back to the generic complex route, checking that the result is
    real as required on the imaginary axis.
    """
    Q = np.atleast_1d(np.asarray(Q, dtype=float))
    if isinstance(model, PerfectMirror):
        r = np.full(Q.shape, -1.0)
        return r, r.copy()
    if isinstance(model, ConstantReflection):
        for r in (model.r_s, model.r_p):
            if abs(complex(r).imag) > _IMAG_TOL:
                raise ValueError(
                    f"constant amplitude {r} is not real on the imaginary axis")
        return (np.full(Q.shape, float(np.real(model.r_s))),
                np.full(Q.shape, float(np.real(model.r_p))))
    if isinstance(model, FresnelReflection) and not isinstance(model.dielectric, Tabulated):
        eps = float(model.dielectric.eval_iw(xi))
        return kernels.fresnel_rs_rp_iw(eps, xi / C_LIGHT, Q)
    out = []
    for pol in ("s", "p"):
        r = np.asarray(model.amplitude(pol, Q, 1j * xi), dtype=complex)
        if np.any(np.abs(r.imag) > _IMAG_TOL * (1.0 + np.abs(r))):
            raise ValueError(
                f"model {model!r} returned a non-real amplitude on the imaginary axis")
        out.append(r.real.astype(float))
    return tuple(out)
