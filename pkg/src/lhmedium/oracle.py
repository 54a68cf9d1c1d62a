"""Rotating-frame master-equation oracle for the four-level scheme.

Builds the 16x16 Liouvillian directly from the level energies, couplings,
population decays and coherence dampings, then extracts the exact
first-order response to the probe by a bordered linear solve. It shares
no algebra with :mod:`lhmedium.response` and is used to validate it.

Conventions (levels are labelled 1..4, matrices are 0-based internally):

* rotating-frame energies are ``E = (0, dm, dc, dc + dp)``; this is the sign
  that reproduces ``rho21 = i*Omega_pm / (Gamma1 + i*delta_m)`` in the
  two-level limit, i.e. the sign used by the closed forms;
* a coupling ``(u, l, a)`` adds ``-a |u><l| - conj(a) |l><u|`` to H
  (units of hbar), with the control carrying ``exp(-i*theta)``;
* the signal detuning is fixed by loop closure, ``ds = dc + dp - dm``.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSteadyStateError, ValidationError
from .response import CoherenceDampings, Coherences, DecayRates, DriveConfig, derive_dampings

log = logging.getLogger(__name__)

DIM = 4
KERNEL_RTOL = 1e-10

COND_WARN = 1e12

AGREE_RTOL = 1e-8
STRUCTURAL_RTOL = 1e-3


class LoopClosureWarning(UserWarning):
    """A user-supplied signal detuning was overridden by loop closure."""


# coherence (upper, lower) -> damping attribute
DAMPING_MAP = {
    (2, 1): "Gamma1",
    (3, 1): "Gamma2",
    (4, 1): "Gamma3",
    (4, 2): "Gamma4",
    (4, 3): "Gamma5",
    (3, 2): "Gamma6",
}


@dataclass(frozen=True)
class LevelModel:
    energies: tuple
    couplings: tuple
    probe_couplings: tuple
    decays: tuple
    dampings: tuple
    dimension: int = DIM

    def damping_matrix(self) -> np.ndarray:
        g = np.zeros((self.dimension, self.dimension))
        for (i, j), rate in self.dampings:
            g[i - 1, j - 1] = g[j - 1, i - 1] = rate
        return g


@dataclass(frozen=True)
class DensityState:
    matrix: np.ndarray = field(repr=False)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(herm).min())

    def element(self, i: int, j: int) -> complex:
        """Matrix element rho_ij with 1-based level labels."""
        return complex(self.matrix[i - 1, j - 1])


@dataclass(frozen=True)
class DiscrepancyReport:
    rel_rho43: float
    rel_rho21: float
    category_rho43: str
    category_rho21: str

    @property
    def worst(self) -> float:
        return max(self.rel_rho43, self.rel_rho21)

    @property
    def category(self) -> str:
        return classify_discrepancy(self.worst)


def build_model(rates: DecayRates, drive: DriveConfig,
                dampings: CoherenceDampings | None = None,
                gamma6_includes_dephasing: bool = False) -> LevelModel:
    if dampings is None:
        dampings = derive_dampings(rates, gamma6_includes_dephasing)
    dp, dc, dm = drive.delta_p, drive.delta_c, drive.delta_m
    ds_closed = dc + dp - dm
    if drive.delta_s and not math.isclose(drive.delta_s, ds_closed, rel_tol=1e-9, abs_tol=1e-9):
        warnings.warn(
            f"delta_s={drive.delta_s!r} ignored; loop closure fixes it to {ds_closed!r}",
            LoopClosureWarning, stacklevel=2)
    return LevelModel(
        energies=(0.0, dm, dc, dc + dp),
        couplings=((3, 1, drive.omega_c * cmath.exp(-1j * drive.theta)),
                   (4, 2, complex(drive.omega_s))),
        probe_couplings=((2, 1, complex(drive.omega_pm)),
                         (4, 3, complex(drive.omega_pe))),
        decays=((2, 1, rates.gamma21), (3, 1, rates.gamma31),
                (4, 2, rates.gamma42), (4, 3, rates.gamma43)),
        dampings=tuple((pair, getattr(dampings, name)) for pair, name in DAMPING_MAP.items()),
    )


def _check(model: LevelModel) -> None:
    n = model.dimension
    if len(model.energies) != n or not all(math.isfinite(e) for e in model.energies):
        raise ValidationError("level energies must be finite, one per level")
    for u, l, amp in model.couplings + model.probe_couplings:
        if not (1 <= l <= n and 1 <= u <= n) or u == l:
            raise ValidationError(f"coupling ({u},{l}) is not a transition of a {n}-level model")
        if not cmath.isfinite(amp):
            raise ValidationError(f"coupling ({u},{l}) amplitude is not finite")
    for a, b, rate in model.decays:
        if rate < 0 or a == b:
            raise ValidationError(f"bad decay channel {a}->{b} at rate {rate!r}")


def hamiltonian(model: LevelModel, include_probe: bool = True, only_probe: bool = False) -> np.ndarray:
    """Rotating-frame Hamiltonian in units of hbar."""
    n = model.dimension
    h = np.zeros((n, n), dtype=complex)
    if not only_probe:
        h += np.diag(np.asarray(model.energies, dtype=float))
        couplings = model.couplings + (model.probe_couplings if include_probe else ())
    else:
        couplings = model.probe_couplings
    for u, l, amp in couplings:
        h[u - 1, l - 1] -= amp
        h[l - 1, u - 1] -= np.conj(amp)
    return h


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """-i[H, .] acting on row-major vec(rho)."""
    eye = np.eye(h.shape[0])
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def build_generator(model: LevelModel, include_probe: bool = True) -> np.ndarray:
    """Liouvillian L with vec(d rho/dt) = L @ vec(rho), row-major vec."""
    _check(model)
    n = model.dimension
    L = commutator_superop(hamiltonian(model, include_probe=include_probe))
    damp = model.damping_matrix()
    idx = np.arange(n * n).reshape(n, n)
    for i in range(n):
        for j in range(n):
            if i != j:
                L[idx[i, j], idx[i, j]] -= damp[i, j]
    for a, b, rate in model.decays:
        L[idx[b - 1, b - 1], idx[a - 1, a - 1]] += rate
        L[idx[a - 1, a - 1], idx[a - 1, a - 1]] -= rate
    return L


def _trace_row(n: int) -> np.ndarray:
    return np.eye(n).reshape(-1).astype(complex)


def kernel_dimension(L: np.ndarray, rtol: float = KERNEL_RTOL) -> int:
    s = np.linalg.svd(L, compute_uv=False)
    if s[0] == 0:
        return L.shape[0]
    return int(np.sum(s <= rtol * s[0]))


def bordered_condition(L: np.ndarray) -> float:
    """2-norm condition number of the trace-bordered system solved below."""
    n = int(round(math.sqrt(L.shape[0])))
    s = np.linalg.svd(np.vstack([L / np.linalg.norm(L), _trace_row(n)]), compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else math.inf


def _bordered_solve(L: np.ndarray, rhs: np.ndarray, trace_value: complex) -> np.ndarray:
    n = int(round(math.sqrt(L.shape[0])))
    scale = np.linalg.norm(L)
    A = np.vstack([L / scale, _trace_row(n)])
    b = np.concatenate([rhs / scale, [trace_value]])
    x, _, _, s = np.linalg.lstsq(A, b, rcond=None)
    cond = s[0] / s[-1] if s[-1] > 0 else math.inf
    if cond > COND_WARN:
        log.warning("bordered solve is ill-conditioned: cond = %.3g", cond)
    else:
        log.debug("bordered solve cond = %.3g", cond)
    return x


def steady_state(L: np.ndarray) -> DensityState:
    k = kernel_dimension(L)
    if k != 1:
        raise DegenerateSteadyStateError(f"Liouvillian kernel has dimension {k}, expected 1")
    n = int(round(math.sqrt(L.shape[0])))
    x = _bordered_solve(L, np.zeros(L.shape[0], dtype=complex), 1.0)
    return DensityState(x.reshape(n, n))


def probe_generator(model: LevelModel) -> np.ndarray:
    return commutator_superop(hamiltonian(model, only_probe=True))


def linear_response(model: LevelModel, probe_amplitudes=None) -> Coherences:
    """Exact first-order (in the probe) coherences rho43 and rho21.

    ``probe_amplitudes=(omega_pe, omega_pm)`` overrides the amplitudes
    stored on the model.
    """
    if probe_amplitudes is not None:
        pe, pm = probe_amplitudes
        model = LevelModel(model.energies, model.couplings,
                           ((2, 1, complex(pm)), (4, 3, complex(pe))),
                           model.decays, model.dampings, model.dimension)
    L0 = build_generator(model, include_probe=False)
    rho0 = steady_state(L0)
    L1 = probe_generator(model)
    rhs = -(L1 @ rho0.matrix.reshape(-1))
    n = model.dimension
    rho1 = _bordered_solve(L0, rhs, 0.0).reshape(n, n)
    return Coherences(rho43=complex(rho1[3, 2]), rho21=complex(rho1[1, 0]))


def full_steady_state(model: LevelModel) -> DensityState:
    """Steady state with the probe included to all orders."""
    return steady_state(build_generator(model, include_probe=True))


def oracle_coherences(rates: DecayRates, drive: DriveConfig,
                      gamma6_includes_dephasing: bool = False) -> Coherences:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LoopClosureWarning)
        model = build_model(rates, drive, gamma6_includes_dephasing=gamma6_includes_dephasing)
    return linear_response(model)


def classify_discrepancy(rel: float) -> str:
    if rel < AGREE_RTOL:
        return "agree"
    if rel <= STRUCTURAL_RTOL:
        return "band"
    return "mismatch"


def _relative_error(a: complex, o: complex, atol: float) -> float:
    diff = abs(a - o)
    if diff <= atol:
        return 0.0
    scale = max(abs(a), abs(o))
    return diff / scale


def compare(analytic: Coherences, oracle: Coherences, atol: float = 1e-15) -> DiscrepancyReport:
    """Relative analytic-vs-oracle errors; differences below ``atol`` count as zero."""
    r43 = _relative_error(analytic.rho43, oracle.rho43, atol)
    r21 = _relative_error(analytic.rho21, oracle.rho21, atol)
    return DiscrepancyReport(rel_rho43=r43, rel_rho21=r21,
                             category_rho43=classify_discrepancy(r43),
                             category_rho21=classify_discrepancy(r21))
