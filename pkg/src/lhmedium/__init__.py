"""Electromagnetic response of a dense four-level EIT vapour with
simultaneously negative permittivity and permeability."""

from .config import SweepConfig, load_config, parse_config
from .errors import (ConfigError, DegenerateSteadyStateError, LHMediumError, PoleError,
                     SingularityError, ValidationError)
from .optics import (MediumConstants, MediumResponse, WindowLabel, classify_point,
                     cm_roundtrip_check, electric_polarizability, electric_susceptibility,
                     figure_of_merit, magnetic_polarizability, medium_response,
                     refractive_index, relative_permeability)
from .oracle import (DensityState, LevelModel, build_generator, build_model, compare,
                     linear_response, oracle_coherences, steady_state)
from .response import (CoefficientSet, CoherenceDampings, Coherences, DecayRates,
                       DriveConfig, Formula, coefficients, coherences, derive_dampings,
                       probe_magnetic_rabi, rho21, rho43)
from .sweep import SweepGrid, SweepRecord, emit_csv, emit_plotdata, run_sweep, verify

__version__ = "0.1.0"
