"""Command-line interface: ``dustflame run | compare | sweep``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, ConsistencyError, DomainError, SolverError
from .io import format_report, read_config
from .runner import compare_runs, comparison_csv, run_simulation, sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_THRESHOLD = 4

log = logging.getLogger("dustflame")


def _threshold(text):
    field, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected FIELD=VALUE, got {text!r}")
    try:
        return field.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _delta_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dustflame", description="1D low-Mach dust-cloud flame solver")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one simulation from a config file")
    run.add_argument("config", type=Path)
    run.add_argument("--out", type=Path, help="output directory (default: out_dir from the config)")

    cmp_ = sub.add_parser("compare", help="compare the final profiles of two run directories")
    cmp_.add_argument("run_a", type=Path, help="reference run")
    cmp_.add_argument("run_b", type=Path)
    cmp_.add_argument("--field", action="append", dest="fields", choices=("yF", "yO", "yP", "theta", "rho", "z"),
                      help="field to compare (repeatable; default yF and theta)")
    cmp_.add_argument("--max-linf", action="append", type=_threshold, default=[], metavar="FIELD=VALUE",
                      help="fail with exit status 4 when the L-inf distance exceeds VALUE "
                           "(relative to the adiabatic temperature for theta)")
    cmp_.add_argument("--window", type=float, help="only compare cells within this distance of the front [m]")
    cmp_.add_argument("--out", type=Path, help="write the comparison CSV here instead of stdout")

    sw = sub.add_parser("sweep", help="primitive reference run, then flame-velocity runs over delta")
    sw.add_argument("config", type=Path)
    sw.add_argument("--deltas", type=_delta_list, required=True, help="comma-separated delta values [m]")
    sw.add_argument("--out", type=Path, help="sweep directory (default: out_dir from the config)")
    sw.add_argument("--jobs", type=int, default=1, help="concurrent member runs")
    sw.add_argument("--reference", type=Path, help="reuse this finished primitive run directory")
    return parser


def _cmd_run(args) -> int:
    cfg = read_config(args.config)
    result = run_simulation(cfg, args.out)
    sys.stdout.write(format_report(result.report))
    return EXIT_OK


def _cmd_compare(args) -> int:
    fields = args.fields or ["yF", "theta"]
    thresholds = dict(args.max_linf)
    unknown = set(thresholds) - set(fields)
    if unknown:
        raise ConfigError(f"thresholds given for fields not compared: {sorted(unknown)}")
    rows = compare_runs(args.run_a, args.run_b, fields, thresholds, args.window)
    text = comparison_csv(rows)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    failed = [r.field for r in rows if not r.passed]
    if failed:
        log.error("threshold exceeded for %s", ", ".join(failed))
        return EXIT_THRESHOLD
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = read_config(args.config)
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    out = args.out or Path(cfg.out_dir)
    ref, results = sweep(cfg, args.deltas, out, jobs=args.jobs, reference_dir=args.reference)
    sys.stdout.write(f"u_f = {ref.u_f!r}\n")
    sys.stdout.write((out / "sweep.csv").read_text(encoding="utf-8"))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "compare": _cmd_compare, "sweep": _cmd_sweep}[args.command]
    try:
        return handler(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"dustflame: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ConsistencyError, DomainError) as exc:
        print(f"dustflame: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
