"""Versioned table of oracle coherences keyed by a parameter-point hash.

The file is JSON: ``{"version": N, "entries": [{"key", "params", "rho43",
"rho21"}, ...]}`` with complex numbers stored as ``[re, im]`` and all
parameters in units of ``gamma_scale`` (except ``gamma_scale`` itself and
``theta`` in radians).
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

from .config import SweepConfig
from .oracle import oracle_coherences
from .response import Coherences

GOLDEN_VERSION = 1

PARAM_KEYS = ("gamma_scale", "gamma43", "gamma42", "gamma31", "gamma21", "gamma_c",
              "gamma1", "gamma6_includes_dephasing", "omega_pe", "omega_pm", "omega_c",
              "omega_s", "delta_p", "delta_c", "delta_m", "theta")


def default_points() -> list:
    """Default-parameter points: omega_s = 14 at delta_p in {-5, 0, 5},
    plus the two spot checks used by the analytic tests."""
    pts = [(14.0, -5.0), (14.0, 0.0), (14.0, 5.0), (14.0, 2.0), (20.0, -1.0),
           (18.0, 0.0)]
    return [point_params(SweepConfig(), omega_s, dp) for omega_s, dp in pts]


def point_params(cfg: SweepConfig, omega_s: float, delta_p: float) -> dict:
    rates = cfg.rates()
    g = cfg.gamma_scale
    return {
        "gamma_scale": g,
        "gamma43": cfg.gamma43, "gamma42": cfg.gamma42, "gamma31": cfg.gamma31,
        "gamma21": rates.gamma21 / g, "gamma_c": cfg.gamma_c, "gamma1": cfg.gamma1,
        "gamma6_includes_dephasing": cfg.gamma6_includes_dephasing,
        "omega_pe": cfg.omega_pe, "omega_pm": cfg.resolved_omega_pm(),
        "omega_c": cfg.omega_c, "omega_s": omega_s, "delta_p": delta_p,
        "delta_c": cfg.delta_c, "delta_m": cfg.delta_m, "theta": cfg.theta,
    }


def point_key(params: dict) -> str:
    canonical = json.dumps({k: params[k] for k in PARAM_KEYS}, sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def params_config(params: dict) -> SweepConfig:
    return SweepConfig(
        gamma_scale=params["gamma_scale"], gamma43=params["gamma43"],
        gamma42=params["gamma42"], gamma31=params["gamma31"], gamma21=params["gamma21"],
        gamma_c=params["gamma_c"], gamma1=params["gamma1"],
        gamma6_includes_dephasing=params["gamma6_includes_dephasing"],
        omega_pe=params["omega_pe"], omega_pm=params["omega_pm"],
        omega_c=params["omega_c"], delta_c=params["delta_c"], delta_m=params["delta_m"],
        theta=params["theta"])


def params_inputs(params: dict):
    """(rates, drive) in absolute units for a stored parameter point."""
    cfg = params_config(params)
    return cfg.rates(), cfg.drive(params["omega_s"], params["delta_p"])


def compute_entry(params: dict) -> dict:
    rates, drive = params_inputs(params)
    coh = oracle_coherences(rates, drive, params["gamma6_includes_dephasing"])
    return {"key": point_key(params), "params": params,
            "rho43": [coh.rho43.real, coh.rho43.imag],
            "rho21": [coh.rho21.real, coh.rho21.imag]}


def regenerate(path, points=None) -> dict:
    entries = [compute_entry(p) for p in (points or default_points())]
    doc = {"version": GOLDEN_VERSION, "entries": entries}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    return doc


def load_golden(path=None) -> dict:
    """Load a golden table; ``path=None`` reads the copy shipped with the package."""
    if path is None:
        text = resources.files("lhmedium").joinpath("data/oracle_golden.json").read_text()
    else:
        text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text)
    if doc.get("version") != GOLDEN_VERSION:
        raise ValueError(f"golden file version {doc.get('version')!r} != {GOLDEN_VERSION}")
    for entry in doc["entries"]:
        if point_key(entry["params"]) != entry["key"]:
            raise ValueError(f"golden entry {entry['key']} hash does not match its params")
    return doc


def entry_coherences(entry: dict) -> Coherences:
    return Coherences(rho43=complex(*entry["rho43"]), rho21=complex(*entry["rho21"]))


def lookup(doc: dict, params: dict) -> dict | None:
    key = point_key(params)
    for entry in doc["entries"]:
        if entry["key"] == key:
            return entry
    return None
