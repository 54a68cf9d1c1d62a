"""Flat ``key = value`` sweep configuration (``#`` comments, no sections).

Dimensionless quantities are given in units of ``gamma_scale``; dipole
moments and density are absolute SI values.
"""

from __future__ import annotations

import configparser
import difflib
import math
import re
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .optics import MediumConstants
from .response import DecayRates, DriveConfig, Formula, probe_magnetic_rabi

_SECTION = "sweep"
_PI_EXPR = re.compile(r"^\s*([+-]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+]+))?\s*$")


@dataclass(frozen=True)
class SweepConfig:
    gamma_scale: float = 1.0e7
    gamma43: float = 0.8
    gamma42: float = 1.5
    gamma31: float = 1.2
    gamma21: float | None = None
    gamma_c: float = 0.8
    gamma1: float = 0.0
    gamma6_includes_dephasing: bool = False
    d34: float = 2.5e-29
    mu12: float = 7.0e-23
    density: float = 5.0e24
    omega_pe: float = 0.05
    omega_pm: float | None = None
    omega_c: float = 8.0
    delta_c: float = 0.005
    delta_m: float = 0.005
    delta_s: float = 0.0
    theta: float = math.pi / 6
    delta_p_from: float = -30.0
    delta_p_to: float = 30.0
    delta_p_steps: int = 6001
    omega_s_list: tuple = (14.0, 18.0, 20.0)
    fom_threshold: float = 100.0
    formula: str = "printed"
    engine: str = "analytic"
    verify_points: int = 61
    verify_band: float = 1e-6
    csv_path: str = "sweep.csv"
    plot_path: str = "sweep.dat"

    def __post_init__(self):
        problems = validate(self)
        if problems:
            raise ConfigError("invalid configuration: " + "; ".join(problems))

    def rates(self) -> DecayRates:
        return DecayRates.from_gamma_units(
            self.gamma_scale, gamma43=self.gamma43, gamma42=self.gamma42,
            gamma31=self.gamma31, gamma21=self.gamma21, gamma_c=self.gamma_c,
            gamma1=self.gamma1)

    def constants(self) -> MediumConstants:
        return MediumConstants(d34=self.d34, mu12=self.mu12, density=self.density)

    def resolved_omega_pm(self) -> float:
        """Magnetic probe Rabi frequency in gamma units (derived unless overridden)."""
        if self.omega_pm is not None:
            return self.omega_pm
        return probe_magnetic_rabi(self.omega_pe, self.d34, self.mu12)

    def drive(self, omega_s: float, delta_p: float) -> DriveConfig:
        """Absolute-unit drive for one grid point given in gamma units."""
        return DriveConfig.from_gamma_units(
            self.gamma_scale, omega_pe=self.omega_pe, omega_pm=self.resolved_omega_pm(),
            omega_c=self.omega_c, omega_s=omega_s, delta_p=delta_p,
            delta_c=self.delta_c, delta_s=self.delta_s, delta_m=self.delta_m,
            theta=self.theta)

    def delta_p_grid(self, steps: int | None = None) -> list:
        steps = self.delta_p_steps if steps is None else steps
        lo, hi = self.delta_p_from, self.delta_p_to
        span = hi - lo
        return [lo + span * k / (steps - 1) for k in range(steps)]


KEYS = tuple(f.name for f in fields(SweepConfig))


def validate(cfg: SweepConfig) -> list:
    problems = []
    if cfg.delta_p_steps < 2:
        problems.append(f"delta_p_steps must be >= 2 (got {cfg.delta_p_steps})")
    if not cfg.delta_p_from < cfg.delta_p_to:
        problems.append("delta_p_from must be < delta_p_to")
    if not cfg.omega_s_list:
        problems.append("omega_s_list must not be empty")
    if not cfg.gamma_scale > 0:
        problems.append("gamma_scale must be > 0")
    for name in ("gamma43", "gamma42", "gamma31", "gamma_c", "gamma1"):
        if getattr(cfg, name) < 0:
            problems.append(f"{name} must be >= 0")
    if cfg.gamma21 is not None and cfg.gamma21 < 0:
        problems.append("gamma21 must be >= 0")
    if not cfg.omega_pe > 0:
        problems.append("omega_pe must be > 0 (the probe must be on)")
    if cfg.omega_pm is not None and cfg.omega_pm < 0:
        problems.append("omega_pm must be >= 0")
    if not cfg.density > 0:
        problems.append("density must be > 0")
    if not cfg.d34 > 0:
        problems.append("d34 must be > 0")
    if cfg.formula not in {f.value for f in Formula}:
        problems.append(f"formula must be one of {[f.value for f in Formula]}")
    if cfg.engine not in ("analytic", "oracle"):
        problems.append("engine must be 'analytic' or 'oracle'")
    if cfg.verify_points < 2:
        problems.append("verify_points must be >= 2")
    if not cfg.verify_band > 0:
        problems.append("verify_band must be > 0")
    return problems


def _parse_float(text: str) -> float:
    m = _PI_EXPR.match(text)
    if m:
        coef = m.group(1)
        value = math.pi * (float(coef) if coef not in ("", "+", "-") else float(coef + "1"))
        if m.group(2):
            value /= float(m.group(2))
        return value
    return float(text)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_value(key: str, text: str):
    text = text.strip()
    if key in ("gamma6_includes_dephasing",):
        return _parse_bool(text)
    if key in ("delta_p_steps", "verify_points"):
        return int(text)
    if key == "omega_s_list":
        return tuple(_parse_float(t) for t in text.split(",") if t.strip())
    if key in ("formula", "engine", "csv_path", "plot_path"):
        return text
    return _parse_float(text)


def _key_lines(text: str) -> dict:
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#") and "=" in stripped:
            lines.setdefault(stripped.split("=", 1)[0].strip(), lineno)
    return lines


def parse_config(text: str, source: str = "<config>") -> SweepConfig:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",), delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n" + text, source=source)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{source}: parse error: {exc.message}") from exc
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        where = f"{source}:{lineno - 1}" if lineno else source
        raise ConfigError(f"{where}: parse error: {exc}") from exc
    if len(parser.sections()) != 1:
        raise ConfigError(f"{source}: sections are not allowed in the flat config format")

    lines = _key_lines(text)
    values = {}
    for key, raw in parser.items(_SECTION):
        where = f"{source}:{lines.get(key, '?')}"
        if key not in KEYS:
            near = difflib.get_close_matches(key, KEYS, n=1)
            hint = f" (did you mean '{near[0]}'?)" if near else ""
            raise ConfigError(f"{where}: unknown key '{key}'{hint}")
        try:
            values[key] = _parse_value(key, raw)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for '{key}': {exc}") from exc
    return SweepConfig(**values)


def load_config(path) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=str(path))
