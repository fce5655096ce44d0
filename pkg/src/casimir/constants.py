"""Physical constants, strict SI."""

HBAR = 1.054571817e-34   # J s
C_LIGHT = 2.99792458e8   # m / s
