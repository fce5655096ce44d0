"""Exception hierarchy shared across the package."""


class CasimirError(Exception):
    """Base class for all package-specific errors."""


class FrequencyDomainError(CasimirError, ValueError):
    """Frequency is neither real positive nor purely imaginary with xi > 0."""


class OpticalTableError(CasimirError, ValueError):
    """Tabulated optical data violates the table contract."""


class SingularKinematicsError(CasimirError, ValueError):
    """Grazing kinematics (normal wavevector k = 0) or a branch-cut ambiguity."""


class ResonanceError(CasimirError, ArithmeticError):
    """Exact cavity/stack resonance hit with zero broadening."""


class PassivityError(CasimirError, ValueError):
    """|r1 r2| >= 1 somewhere on the integration grid (active medium)."""


class ConvergenceError(CasimirError, ArithmeticError):
    """Subdivision budget exhausted before the tolerance was met.

    Carries the best available estimate so callers can degrade gracefully.
    """

    def __init__(self, message, value=None, error=None, partial_sums=None):
        super().__init__(message)
        self.value = value
        self.error = error
        self.partial_sums = partial_sums


class DivergenceError(CasimirError, ArithmeticError):
    """Integrand samples do not decay on a semi-infinite domain."""


class ConfigError(CasimirError, ValueError):
    """Run-configuration file is malformed; message names the offending key."""
