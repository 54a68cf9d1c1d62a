"""Command-line entry point: ``lhmedium sweep | verify | golden regen``.

Exit codes: 0 success, 1 usage/config error, 2 verification failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import golden
from .config import SweepConfig, load_config
from .errors import ConfigError
from .sweep import emit_csv, emit_plotdata, run_sweep, verify, verify_exit_code

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("lhmedium")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lhmedium", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="detuning sweep -> CSV (and plot data)")
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--out", type=Path, help="CSV output path (overrides csv_path)")
    p.add_argument("--plot", action="store_true", help="also write plot data + gnuplot script")
    p.add_argument("--threads", type=int, default=1, help="worker processes")

    p = sub.add_parser("verify", help="compare closed forms with the master-equation oracle")
    p.add_argument("--config", type=Path)
    p.add_argument("--points", type=int, help="delta_p points per overlay (default verify_points)")
    p.add_argument("--report-only", action="store_true", help="always exit 0")

    p = sub.add_parser("golden", help="golden oracle data")
    gsub = p.add_subparsers(dest="golden_command", required=True, parser_class=_Parser)
    g = gsub.add_parser("regen", help="recompute the golden oracle table")
    g.add_argument("--out", type=Path, required=True)
    return parser


def _config(path) -> SweepConfig:
    return load_config(path) if path else SweepConfig()


def _cmd_sweep(args) -> int:
    cfg = _config(args.config)
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    t0 = time.perf_counter()
    grid = run_sweep(cfg, workers=args.threads)
    out = args.out or Path(cfg.csv_path)
    emit_csv(grid, out)
    print(f"wrote {len(grid)} records to {out} ({time.perf_counter() - t0:.2f} s)")
    if grid.errors:
        print(f"{len(grid.errors)} grid points hit a pole and are marked POLE")
    if args.plot:
        plot_path = Path(cfg.plot_path) if not args.out else out.with_suffix(".dat")
        script = emit_plotdata(grid, plot_path)
        print(f"wrote plot data to {plot_path} and {script}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _config(args.config)
    report = verify(cfg, points=args.points)
    print(report.format())
    return verify_exit_code(report, args.report_only)


def _cmd_golden(args) -> int:
    doc = golden.regenerate(args.out)
    print(f"wrote {len(doc['entries'])} oracle entries (version {doc['version']}) to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": _cmd_sweep, "verify": _cmd_verify, "golden": _cmd_golden}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
