"""Physical constants (CODATA 2018) used everywhere in the package."""

C_LIGHT = 2.99792458e8  # m/s
EPSILON_0 = 8.8541878128e-12  # F/m
MU_0 = 1.25663706212e-6  # H/m
HBAR = 1.054571817e-34  # J s

# magnetic dipole decay relative to electric dipole decay (fine-structure^2)
FINE_STRUCTURE_INV = 137.0
