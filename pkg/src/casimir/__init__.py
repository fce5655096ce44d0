"""Casimir pressure between planar slabs driven by reflection amplitudes."""

from .constants import C_LIGHT, HBAR
from .dielectric import (
    Constant,
    DielectricModel,
    Drude,
    DrudeLorentz,
    OpticalTable,
    Plasma,
    Tabulated,
    Vacuum,
    eval_permittivity,
    load_optical_table,
    permittivity_from_table,
)
from .errors import (
    CasimirError,
    ConfigError,
    ConvergenceError,
    DivergenceError,
    FrequencyDomainError,
    OpticalTableError,
    PassivityError,
    ResonanceError,
    SingularKinematicsError,
)
from .force import (
    ForceResult,
    force_imag_axis,
    force_real_axis,
    ideal_casimir_pressure,
    lifshitz_force,
    reduction_factor,
)
from .quadrature import QuadratureConfig, integrate, integrate_semi_infinite
from .reflection import (
    ConstantReflection,
    FresnelReflection,
    ImpedanceReflection,
    LayerStack,
    MultilayerReflection,
    PerfectMirror,
    ReflectionModel,
    WaveKinematics,
    fresnel,
    impedance_to_reflection,
    multilayer_reflection,
    perfect_mirror,
    vacuum_impedance,
)
from .spectrum import ModeFunctions, dos, dos_from_greens, green_electric, green_magnetic

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
