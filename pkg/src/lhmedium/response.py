"""Closed-form first-order steady-state coherences of the four-level scheme.

Level layout: |1>,|2> lower (magnetic-dipole pair, probe B field),
|3>,|4> upper (electric-dipole pair, probe E field). The control field
drives |1>-|3> as an effective two-photon coupling and the signal field
drives |2>-|4>.

Everything here is a pure function of immutable parameter records. Rates
and Rabi frequencies are absolute angular frequencies (s^-1); use the
``from_gamma_units`` constructors to work in multiples of the scale rate.

Two formula variants are available (see :class:`Formula`):

``PRINTED``
    The coefficient algebra exactly as published.
``CORRECTED``
    Two errata, both located by comparison against the master-equation
    oracle in :mod:`lhmedium.oracle`: ``A11`` uses ``2*Gamma2`` in place of
    ``2*Gamma1``, and the signal-assisted term of ``rho21`` carries
    ``exp(-i*theta)`` instead of ``exp(+i*theta)``. With these the
    closed forms agree with the oracle to machine precision whenever
    ``delta_m == delta_p``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import asdict, dataclass

from .constants import C_LIGHT, FINE_STRUCTURE_INV
from .errors import PoleError, SingularityError, ValidationError

DEFAULT_GAMMA = 1.0e7

POLE_RTOL = 1e-12


class Formula(str, enum.Enum):
    PRINTED = "printed"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class DecayRates:
    """Spontaneous and collisional rates in s^-1.

    ``gamma21`` is the (slow) magnetic-dipole decay |2>->|1>;
    ``gamma1`` is the decay of the ground level and is zero by convention.
    """

    gamma_scale: float = DEFAULT_GAMMA
    gamma43: float = 0.8 * DEFAULT_GAMMA
    gamma42: float = 1.5 * DEFAULT_GAMMA
    gamma31: float = 1.2 * DEFAULT_GAMMA
    gamma21: float = 0.8 * DEFAULT_GAMMA / FINE_STRUCTURE_INV**2
    gamma_c: float = 0.8 * DEFAULT_GAMMA
    gamma1: float = 0.0

    def __post_init__(self):
        if not self.gamma_scale > 0:
            raise ValidationError(f"gamma_scale must be > 0, got {self.gamma_scale!r}")
        for name in ("gamma43", "gamma42", "gamma31", "gamma21", "gamma_c", "gamma1"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValidationError(f"{name} must be a finite rate >= 0, got {value!r}")

    @classmethod
    def from_gamma_units(cls, gamma_scale=DEFAULT_GAMMA, *, gamma43=0.8, gamma42=1.5,
                         gamma31=1.2, gamma21=None, gamma_c=0.8, gamma1=0.0):
        """Build from dimensionless multiples of ``gamma_scale``.

        If ``gamma21`` is omitted it follows ``gamma43 / 137**2``.
        """
        if gamma21 is None:
            gamma21 = gamma43 / FINE_STRUCTURE_INV**2
        g = gamma_scale
        return cls(gamma_scale=g, gamma43=gamma43 * g, gamma42=gamma42 * g,
                   gamma31=gamma31 * g, gamma21=gamma21 * g, gamma_c=gamma_c * g,
                   gamma1=gamma1 * g)


@dataclass(frozen=True)
class CoherenceDampings:
    Gamma1: float
    Gamma2: float
    Gamma3: float
    Gamma4: float
    Gamma5: float
    Gamma6: float


@dataclass(frozen=True)
class DriveConfig:
    """Field parameters in s^-1 (Rabi frequencies, detunings) and radians.

    ``theta`` is the single relative phase theta_c - theta_s; the probe
    E and B components share one phase. ``delta_s`` is kept for the record
    but does not enter the closed forms.
    """

    omega_pe: float
    omega_pm: float
    omega_c: float
    omega_s: float
    delta_p: float = 0.0
    delta_c: float = 0.0
    delta_s: float = 0.0
    delta_m: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.omega_pe < 0 or self.omega_pm < 0:
            raise ValidationError("probe Rabi frequencies must be >= 0")

    @property
    def weak_probe(self) -> bool:
        return self.omega_pe < 0.1 * self.omega_c

    @classmethod
    def from_gamma_units(cls, gamma_scale=DEFAULT_GAMMA, **values):
        g = gamma_scale
        scaled = {k: (v if k == "theta" else v * g) for k, v in values.items()}
        return cls(**scaled)

    def replace(self, **changes) -> "DriveConfig":
        fields = asdict(self)
        fields.update(changes)
        return DriveConfig(**fields)


@dataclass(frozen=True)
class CoefficientSet:
    A0: complex
    A11: complex
    A12: complex
    A13: complex
    A21: complex
    A22: complex
    A23: complex
    A31: complex
    A32: complex
    A33: complex
    A41: complex
    A42: complex
    A43: complex
    D0: complex
    D1: complex
    D2: complex


@dataclass(frozen=True)
class Coherences:
    rho43: complex
    rho21: complex


def derive_dampings(rates: DecayRates, gamma6_includes_dephasing: bool = False) -> CoherenceDampings:
    """Coherence damping rates Gamma1..Gamma6 from the population decay rates.

    Gamma6 (the |3>-|2> coherence) carries no collisional term unless
    ``gamma6_includes_dephasing`` is set.
    """
    g1, g21, g31 = rates.gamma1, rates.gamma21, rates.gamma31
    g4x = rates.gamma42 + rates.gamma43
    gc = rates.gamma_c
    Gamma6 = 0.5 * (g31 + g21)
    if gamma6_includes_dephasing:
        Gamma6 += gc
    return CoherenceDampings(
        Gamma1=0.5 * (g1 + g21) + gc,
        Gamma2=0.5 * (g1 + g31) + gc,
        Gamma3=0.5 * (g1 + g4x) + gc,
        Gamma4=0.5 * (g21 + g4x) + gc,
        Gamma5=0.5 * (g31 + g4x) + gc,
        Gamma6=Gamma6,
    )


def probe_magnetic_rabi(omega_pe: float, d34: float, mu12: float) -> float:
    """Magnetic-component Rabi frequency of the same probe beam (B = E/c)."""
    if d34 == 0:
        raise ZeroDivisionError("d34 must be nonzero to relate the probe Rabi frequencies")
    return omega_pe * mu12 / (C_LIGHT * d34)


def coefficients(dampings: CoherenceDampings, drive: DriveConfig, rates: DecayRates,
                 formula: Formula = Formula.PRINTED) -> CoefficientSet:
    I = 1j
    G1, G2, G3 = dampings.Gamma1, dampings.Gamma2, dampings.Gamma3
    G5, G6 = dampings.Gamma5, dampings.Gamma6
    g31 = rates.gamma31
    Dp, Dc, Dm = drive.delta_p, drive.delta_c, drive.delta_m
    Oc2 = drive.omega_c**2
    Os2 = drive.omega_s**2

    a0_den = G2**2 * g31 + g31 * Dc**2 + 4 * G2 * Oc2
    if a0_den == 0:
        raise SingularityError("A0 denominator vanishes (gamma31 = 0 and Gamma2*Omega_c^2 = 0)")

    # A11: the published form multiplies the |4>-|1> factor by 2*Gamma1.
    a11_weight = 2 * (G1 if Formula(formula) is Formula.PRINTED else G2)

    return CoefficientSet(
        A0=I / a0_den,
        A11=g31 * (G2 - I * Dc) + a11_weight * (G3 + I * (Dc + Dp)),
        A12=(G1 + I * Dm) * (G6 - I * (Dc - Dp)) + Oc2,
        A13=Os2 * (I * g31 * Dc - G2 * (g31 - 2 * G6 + 2 * I * Dc - 2 * I * Dp)),
        A21=(G2 - I * Dc) * (G3 + G6 + 2 * I * Dp) * (G2 * g31 + I * g31 * Dc + Oc2),
        A22=g31 * (G1 + I * Dm) * (-G3 - I * (Dc + Dp)),
        A23=G3 - g31 + G6 + 2 * I * Dp,
        A31=-G2 * g31 - I * g31 * Dc - Oc2,
        A32=G3 + I * (Dc + Dp),
        A33=G6 + I * (Dp - Dc),
        A41=G3 + G6 + 2 * I * Dp,
        A42=G3 + g31 + I * (Dc + Dp),
        A43=g31 * (Dp - I * G5) + I * Oc2,
        D0=(G1 + I * Dm) * (G6 - I * (Dc - Dp)) + Oc2,
        D1=(G5 + I * Dp) * (G3 + I * (Dc + Dp)) + Oc2,
        D2=(I * G6 + Dc - Dp) * (Dp - I * G5) + (G1 + I * Dm) * (G3 + I * (Dc + Dp)) - 2 * Oc2,
    )


def _point(drive: DriveConfig, rates: DecayRates) -> dict:
    g = rates.gamma_scale
    return {k: (v if k == "theta" else v / g) for k, v in asdict(drive).items()}


def _denominator(k: CoefficientSet, drive: DriveConfig, rates: DecayRates) -> complex:
    Os2 = drive.omega_s**2
    t0 = k.D0 * k.D1
    t1 = k.D2 * Os2
    t2 = Os2 * Os2
    den = t0 + t1 + t2
    scale = max(abs(t0), abs(t1), t2)
    if abs(den) <= POLE_RTOL * scale:
        raise PoleError("resonance denominator D0*D1 + D2*Os^2 + Os^4 vanishes",
                        _point(drive, rates))
    return den


def rho43(dampings: CoherenceDampings, drive: DriveConfig, rates: DecayRates,
          formula: Formula = Formula.PRINTED) -> complex:
    """Electric-dipole coherence rho43, linear in the probe amplitudes."""
    k = coefficients(dampings, drive, rates, formula)
    return _rho43(k, _denominator(k, drive, rates), dampings, drive, rates)


def _rho43(k, den, dampings, drive, rates):
    G2 = dampings.Gamma2
    Dc = drive.delta_c
    Oc, Os = drive.omega_c, drive.omega_s
    Oc2, Os2 = Oc * Oc, Os * Os
    phase = cmath.exp(1j * drive.theta)

    direct = k.A0 * Oc2 * drive.omega_pe * (k.A11 * k.A12 + k.A13)
    cross = phase * k.A0 * drive.omega_pm * Oc * Os * (
        k.A21 - (G2 + 1j * Dc) * (k.A22 - k.A23 * Oc2 - rates.gamma31 * Os2))
    return (direct + cross) / den


def rho21(dampings: CoherenceDampings, drive: DriveConfig, rates: DecayRates,
          formula: Formula = Formula.PRINTED) -> complex:
    """Magnetic-dipole coherence rho21, linear in the probe amplitudes."""
    k = coefficients(dampings, drive, rates, formula)
    return _rho21(k, _denominator(k, drive, rates), dampings, drive, rates, formula)


def _rho21(k, den, dampings, drive, rates, formula):
    I = 1j
    G2, G5, G6 = dampings.Gamma2, dampings.Gamma5, dampings.Gamma6
    g31 = rates.gamma31
    Dp, Dc = drive.delta_p, drive.delta_c
    Oc, Os = drive.omega_c, drive.omega_s
    Oc2, Os2 = Oc * Oc, Os * Os
    sign = 1 if Formula(formula) is Formula.PRINTED else -1
    phase = cmath.exp(sign * I * drive.theta)

    cross = phase * k.A0 * drive.omega_pe * Oc * Os * (
        k.A41 * (G2 + I * Dc) * Oc2
        + (I * Dc - G2) * (g31 * Os2 - k.A42 * Oc2 + (I * G6 + Dc - Dp) * k.A43))
    lead = (G5 + I * Dp) * k.A32 + Oc2
    direct = (k.A0 * drive.omega_pm * k.A31 * (I * Dc - G2) * (k.A33 * lead + k.A32 * Os2)
              - k.A0 * drive.omega_pm * Oc2 * (G2 + I * Dc)
              * ((g31 - k.A33) * lead - (k.A32 + g31) * Os2))
    return (cross + direct) / den


def coherences(dampings: CoherenceDampings, drive: DriveConfig, rates: DecayRates,
               formula: Formula = Formula.PRINTED) -> Coherences:
    k = coefficients(dampings, drive, rates, formula)
    den = _denominator(k, drive, rates)
    return Coherences(rho43=_rho43(k, den, dampings, drive, rates),
                      rho21=_rho21(k, den, dampings, drive, rates, formula))
