"""Detuning sweeps, CSV / plot-data emission and the oracle verification run."""

from __future__ import annotations

import csv
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import SweepConfig
from .errors import LHMediumError
from .optics import classify_point, medium_response
from .oracle import (STRUCTURAL_RTOL, LoopClosureWarning, build_model, compare,
                     linear_response)
from .response import Formula, coherences, derive_dampings

CSV_HEADER = ("omega_s_over_gamma", "delta_p_over_gamma", "re_eps", "im_eps", "re_mu",
              "im_mu", "re_n", "im_n", "fom", "label")

OBSERVABLES = ("re_eps", "im_eps", "re_mu", "im_mu", "re_n", "im_n", "fom")

ERROR_LABEL = "POLE"


@dataclass(frozen=True)
class SweepRecord:
    omega_s_over_gamma: float
    delta_p_over_gamma: float
    re_eps: float
    im_eps: float
    re_mu: float
    im_mu: float
    re_n: float
    im_n: float
    fom: float
    label: str
    # eps*mu, kept so that the branch of n can be checked or re-chosen
    re_n_squared: float = math.nan
    im_n_squared: float = math.nan
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def row(self) -> tuple:
        return tuple(getattr(self, name) for name in CSV_HEADER)


@dataclass
class SweepGrid:
    config: SweepConfig
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def overlay(self, omega_s: float) -> list:
        return [r for r in self.records if r.omega_s_over_gamma == omega_s]

    @property
    def errors(self) -> list:
        return [r for r in self.records if not r.ok]


def _error_record(omega_s, delta_p, exc) -> SweepRecord:
    nan = math.nan
    return SweepRecord(omega_s, delta_p, nan, nan, nan, nan, nan, nan, nan,
                       ERROR_LABEL, error=f"{type(exc).__name__}: {exc}")


def evaluate_points(cfg: SweepConfig, points) -> list:
    """Evaluate (omega_s, delta_p) pairs given in gamma units, in order."""
    rates = cfg.rates()
    dampings = derive_dampings(rates, cfg.gamma6_includes_dephasing)
    consts = cfg.constants()
    formula = Formula(cfg.formula)
    out = []
    for omega_s, delta_p in points:
        drive = cfg.drive(omega_s, delta_p)
        try:
            if cfg.engine == "oracle":
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", LoopClosureWarning)
                    model = build_model(rates, drive, dampings)
                coh = linear_response(model)
            else:
                coh = coherences(dampings, drive, rates, formula)
            resp = medium_response(coh.rho43, coh.rho21, drive.omega_pe, consts)
        except (LHMediumError, ZeroDivisionError) as exc:
            out.append(_error_record(omega_s, delta_p, exc))
            continue
        out.append(SweepRecord(
            omega_s_over_gamma=omega_s, delta_p_over_gamma=delta_p,
            re_eps=resp.eps_r.real, im_eps=resp.eps_r.imag,
            re_mu=resp.mu_r.real, im_mu=resp.mu_r.imag,
            re_n=resp.n.real, im_n=resp.n.imag, fom=resp.fom,
            label=classify_point(resp, cfg.fom_threshold).value,
            re_n_squared=resp.n_squared.real, im_n_squared=resp.n_squared.imag))
    return out


def _grid_points(cfg: SweepConfig, steps: int | None = None) -> list:
    deltas = cfg.delta_p_grid(steps)
    return [(omega_s, dp) for omega_s in cfg.omega_s_list for dp in deltas]


def _chunks(items, n):
    size = max(1, math.ceil(len(items) / n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepGrid:
    """Evaluate the full (omega_s overlay) x (delta_p) grid.

    Rows come out overlay-major with delta_p ascending regardless of
    ``workers``; a pole at one grid point only marks that row.
    """
    points = _grid_points(cfg)
    if workers <= 1:
        records = evaluate_points(cfg, points)
    else:
        chunks = _chunks(points, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(evaluate_points, [cfg] * len(chunks), chunks)
            records = [rec for part in parts for rec in part]
    if not records:
        raise LHMediumError("sweep produced no records")
    return SweepGrid(cfg, records)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(grid: SweepGrid, path) -> None:
    if not grid.records:
        raise ValueError("cannot emit an empty grid")
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in grid.records:
            writer.writerow([_fmt(v) for v in rec.row()])


_GNUPLOT_TEMPLATE = """\
# gnuplot script for {data}
# Data blocks are ordered observable-major, then by omega_s overlay;
# block index = observable_index * {n_overlays} + overlay_index.
# Observables: {observables}
set datafile separator whitespace
set terminal pngcairo size 800,600
set xlabel "Delta_p / gamma"
set key top right
{plots}
"""


def _gnuplot_script(data_name: str, overlays, observables=OBSERVABLES) -> str:
    plots = []
    titles = {"re_eps": "Re eps_r", "im_eps": "Im eps_r", "re_mu": "Re mu_r",
              "im_mu": "Im mu_r", "re_n": "Re n", "im_n": "Im n", "fom": "FOM"}
    for o_idx, obs in enumerate(observables):
        terms = []
        for s_idx, omega_s in enumerate(overlays):
            block = o_idx * len(overlays) + s_idx
            terms.append(f"'{data_name}' index {block} using 1:2 with lines "
                         f"dt {s_idx + 1} title 'Omega_s = {omega_s:g} gamma'")
        logscale = "set logscale y\n" if obs == "fom" else "unset logscale y\n"
        plots.append(f"set output '{data_name}.{obs}.png'\n{logscale}"
                     f"set ylabel '{titles[obs]}'\nplot " + ", \\\n     ".join(terms))
    return _GNUPLOT_TEMPLATE.format(data=data_name, n_overlays=len(overlays),
                                    observables=" ".join(observables),
                                    plots="\n".join(plots))


def emit_plotdata(grid: SweepGrid, path) -> Path:
    """Whitespace-separated blocks, one per (observable, overlay).

    Blocks are separated by two blank lines so external tools can address
    them by index. A gnuplot script is written next to the data file and
    its path returned.
    """
    if not grid.records:
        raise ValueError("cannot emit an empty grid")
    path = Path(path)
    overlays = list(dict.fromkeys(r.omega_s_over_gamma for r in grid.records))
    blocks = []
    for obs in OBSERVABLES:
        for omega_s in overlays:
            lines = [f"# observable={obs} omega_s_over_gamma={_fmt(omega_s)}",
                     f"# delta_p_over_gamma {obs}"]
            for rec in grid.overlay(omega_s):
                lines.append(f"{_fmt(rec.delta_p_over_gamma)} {_fmt(getattr(rec, obs))}")
            blocks.append("\n".join(lines))
    with path.open("w", newline="\n", encoding="utf-8") as fh:
        fh.write("\n\n\n".join(blocks) + "\n")
    script = path.with_suffix(path.suffix + ".gp")
    with script.open("w", newline="\n", encoding="utf-8") as fh:
        fh.write(_gnuplot_script(path.name, overlays))
    return script


@dataclass
class VerifyRow:
    omega_s: float
    delta_p: float
    rel_rho43: float
    rel_rho21: float

    @property
    def worst(self) -> float:
        return max(self.rel_rho43, self.rel_rho21)


@dataclass
class VerifyReport:
    formula: str
    band: float
    rows: list
    alt_formula: str | None = None
    alt_rows: list = field(default_factory=list)
    # same grid with delta_m tied to delta_p, per formula variant
    tied_rows: dict = field(default_factory=dict)

    @staticmethod
    def _worst(rows, attr):
        return max(rows, key=lambda r: getattr(r, attr))

    @property
    def worst(self) -> float:
        return max(r.worst for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.worst < self.band

    @property
    def structural(self) -> bool:
        return self.worst > STRUCTURAL_RTOL

    def mismatch_regions(self, rows=None, threshold=None) -> dict:
        """Contiguous delta_p intervals (per overlay) whose error exceeds ``threshold``."""
        rows = self.rows if rows is None else rows
        threshold = self.band if threshold is None else threshold
        regions = {}
        for omega_s in dict.fromkeys(r.omega_s for r in rows):
            spans, start, prev = [], None, None
            for r in (r for r in rows if r.omega_s == omega_s):
                if r.worst >= threshold:
                    start = r.delta_p if start is None else start
                    prev = r.delta_p
                elif start is not None:
                    spans.append((start, prev))
                    start = None
            if start is not None:
                spans.append((start, prev))
            if spans:
                regions[omega_s] = spans
        return regions

    def _summary(self, rows, formula) -> list:
        w43 = self._worst(rows, "rel_rho43")
        w21 = self._worst(rows, "rel_rho21")
        lines = [
            f"formula={formula}: worst rel error rho43 = {w43.rel_rho43:.3e} "
            f"at omega_s={w43.omega_s:g}, delta_p={w43.delta_p:g}",
            f"formula={formula}: worst rel error rho21 = {w21.rel_rho21:.3e} "
            f"at omega_s={w21.omega_s:g}, delta_p={w21.delta_p:g}",
        ]
        regions = self.mismatch_regions(rows)
        if regions:
            lines.append(f"formula={formula}: regions above band {self.band:g}:")
            for omega_s, spans in regions.items():
                text = ", ".join(f"[{a:g}, {b:g}]" for a, b in spans)
                lines.append(f"  omega_s={omega_s:g}: delta_p in {text}")
        else:
            lines.append(f"formula={formula}: all points within band {self.band:g}")
        return lines

    def format(self) -> str:
        lines = [f"analytic vs oracle over {len(self.rows)} points"]
        lines += self._summary(self.rows, self.formula)
        if self.alt_rows:
            lines += self._summary(self.alt_rows, self.alt_formula)
        for name, rows in self.tied_rows.items():
            worst = max(r.worst for r in rows)
            lines.append(f"diagnostic delta_m = delta_p: formula={name} worst rel error "
                         f"{worst:.3e}")
        verdict = "PASS" if self.passed else ("STRUCTURAL MISMATCH" if self.structural else "FAIL")
        lines.append(f"verdict: {verdict} (worst {self.worst:.3e}, band {self.band:g})")
        return "\n".join(lines)


def _verify_points(cfg: SweepConfig, points, formula, tie_delta_m=False) -> list:
    rates = cfg.rates()
    dampings = derive_dampings(rates, cfg.gamma6_includes_dephasing)
    rows = []
    for omega_s, delta_p in points:
        drive = cfg.drive(omega_s, delta_p)
        if tie_delta_m:
            drive = drive.replace(delta_m=drive.delta_p)
        try:
            analytic = coherences(dampings, drive, rates, formula)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", LoopClosureWarning)
                oracle = linear_response(build_model(rates, drive, dampings))
        except (LHMediumError, ZeroDivisionError):
            rows.append(VerifyRow(omega_s, delta_p, math.inf, math.inf))
            continue
        rep = compare(analytic, oracle)
        rows.append(VerifyRow(omega_s, delta_p, rep.rel_rho43, rep.rel_rho21))
    return rows


def verify(cfg: SweepConfig, points: int | None = None, compare_alt: bool = True) -> VerifyReport:
    """Analytic-vs-oracle comparison over a coarse grid of the sweep range."""
    grid = _grid_points(cfg, points or cfg.verify_points)
    formula = Formula(cfg.formula)
    report = VerifyReport(formula=formula.value, band=cfg.verify_band,
                          rows=_verify_points(cfg, grid, formula))
    if compare_alt:
        alt = Formula.CORRECTED if formula is Formula.PRINTED else Formula.PRINTED
        report.alt_formula = alt.value
        report.alt_rows = _verify_points(cfg, grid, alt)
        for f in Formula:
            report.tied_rows[f.value] = _verify_points(cfg, grid, f, tie_delta_m=True)
    return report


def verify_exit_code(report: VerifyReport, report_only: bool = False) -> int:
    if report_only or report.passed:
        return 0
    return 2
