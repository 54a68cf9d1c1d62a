"""Microscopic coherences to macroscopic material constants.

Local-field (Clausius-Mossotti) corrections take the atomic polarizability
volumes to a susceptibility and a relative permeability; the refractive
index uses the negative square-root branch of a left-handed medium.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .constants import C_LIGHT, EPSILON_0, HBAR, MU_0
from .errors import PoleError, ValidationError

CM_POLE_TOL = 1e-12


class WindowLabel(str, enum.Enum):
    LEFT_HANDED_LOW_LOSS = "LEFT_HANDED_LOW_LOSS"
    LEFT_HANDED_LOSSY = "LEFT_HANDED_LOSSY"
    NOT_LEFT_HANDED = "NOT_LEFT_HANDED"


@dataclass(frozen=True)
class MediumConstants:
    """Dipole moments and density of the vapour.

    d34 is the electric dipole of |3>-|4> (C m); mu12 the magnetic dipole
    of |1>-|2> (A m^2); density the atomic number density (m^-3).
    """

    d34: float = 2.5e-29
    mu12: float = 7.0e-23
    density: float = 5.0e24

    def __post_init__(self):
        if not self.density > 0:
            raise ValidationError(f"density must be > 0, got {self.density!r}")
        if not self.d34 > 0:
            raise ValidationError(f"d34 must be > 0, got {self.d34!r}")
        if self.mu12 < 0:
            raise ValidationError(f"mu12 must be >= 0, got {self.mu12!r}")


@dataclass(frozen=True)
class MediumResponse:
    gamma_e: complex
    gamma_m: complex
    chi_e: complex
    eps_r: complex
    mu_r: complex
    n: complex
    n_squared: complex
    fom: float


def electric_polarizability(rho43: complex, omega_pe: float, k: MediumConstants) -> complex:
    """Polarizability volume (m^3) 2 d34^2 rho43 / (eps0 hbar Omega_pe)."""
    if omega_pe == 0:
        raise ZeroDivisionError("probe electric Rabi frequency must be nonzero")
    return 2 * k.d34**2 * rho43 / (EPSILON_0 * HBAR * omega_pe)


def magnetic_polarizability(rho21: complex, omega_pe: float, k: MediumConstants) -> complex:
    """Magnetizability volume (m^3) 2 mu0 mu12 rho21 / B_p.

    The probe B amplitude follows from E_p = hbar Omega_pe / d34 and
    B_p = E_p / c.
    """
    if omega_pe == 0:
        raise ZeroDivisionError("probe electric Rabi frequency must be nonzero")
    return 2 * MU_0 * k.mu12 * rho21 * C_LIGHT * k.d34 / (HBAR * omega_pe)


def electric_susceptibility(gamma_e: complex, density: float) -> complex:
    x = density * gamma_e
    den = 1 - x / 3
    if abs(den) < CM_POLE_TOL:
        raise PoleError("electric local-field catastrophe: N*gamma_e -> 3",
                        {"n_gamma_e": x})
    return x / den


def relative_permeability(gamma_m: complex, density: float) -> complex:
    y = density * gamma_m
    den = 1 - y / 3
    if abs(den) < CM_POLE_TOL:
        raise PoleError("magnetic local-field catastrophe: N*gamma_m -> 3",
                        {"n_gamma_m": y})
    return (1 + 2 * y / 3) / den


def cm_roundtrip_check(mu_r: complex, density: float) -> complex:
    """Magnetizability recovered from a permeability (inverse Clausius-Mossotti)."""
    den = 2 / 3 + mu_r / 3
    if abs(den) < CM_POLE_TOL:
        raise PoleError("inverse Clausius-Mossotti pole at mu_r = -2", {"mu_r": mu_r})
    return (mu_r - 1) / den / density


def refractive_index(eps_r: complex, mu_r: complex) -> complex:
    """Left-handed index: minus the principal root of eps_r * mu_r."""
    return -cmath.sqrt(complex(eps_r) * complex(mu_r))


def figure_of_merit(n: complex) -> float:
    """|Re n| / |Im n|, or +inf when the index is exactly real."""
    if n.imag == 0:
        return math.inf
    return abs(n.real) / abs(n.imag)


def classify_point(resp: MediumResponse, fom_threshold: float = 100.0) -> WindowLabel:
    if resp.eps_r.real < 0 and resp.mu_r.real < 0:
        if resp.fom > fom_threshold:
            return WindowLabel.LEFT_HANDED_LOW_LOSS
        return WindowLabel.LEFT_HANDED_LOSSY
    return WindowLabel.NOT_LEFT_HANDED


def medium_response(rho43: complex, rho21: complex, omega_pe: float,
                    k: MediumConstants) -> MediumResponse:
    """Full chain from the two coherences to eps_r, mu_r, n and the FOM."""
    gamma_e = electric_polarizability(rho43, omega_pe, k)
    gamma_m = magnetic_polarizability(rho21, omega_pe, k)
    chi_e = electric_susceptibility(gamma_e, k.density)
    eps_r = 1 + chi_e
    mu_r = relative_permeability(gamma_m, k.density)
    n_squared = eps_r * mu_r
    n = -cmath.sqrt(n_squared)
    return MediumResponse(gamma_e=gamma_e, gamma_m=gamma_m, chi_e=chi_e, eps_r=eps_r,
                          mu_r=mu_r, n=n, n_squared=n_squared, fom=figure_of_merit(n))
