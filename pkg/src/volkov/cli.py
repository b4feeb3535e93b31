"""``volkov-check``: run check suites and summarise reports.

Exit status: 0 all checks pass, 1 some check fails or is inconclusive,
2 configuration or runtime error (no report is written).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SUITES, ConfigError, load_config
from .report import ReportError, read_json, summarize, to_document, write_csv, write_json

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

APPENDIX_COLUMNS = ("n", "kappa1", "kappa2", "sigma", "value", "target", "error")
CHECK_COLUMNS = ("suite", "check", "anchor", "error", "tolerance", "passed", "status", "seed")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser():
    ap = _Parser(prog="volkov-check", description="Volkov-state identity checks")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("check", help="run suites and write a JSON report")
    c.add_argument("--config", required=True, help="key = value config file")
    c.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    c.add_argument("--seed", help="unsigned 64-bit seed")
    c.add_argument("--out", help="JSON report path")
    c.add_argument("--csv", help="directory for CSV tables")
    c.add_argument("--quiet", action="store_true", help="do not print the summary table")
    s = sub.add_parser("summarize", help="print the table for a saved report")
    s.add_argument("--in", dest="inp", required=True, help="JSON report path")
    return ap


def _cmd_check(args) -> int:
    from . import suites

    overrides = {}
    if args.suite:
        overrides["suites"] = ",".join(args.suite)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output.json"] = args.out
    if args.csv is not None:
        overrides["output.csv"] = args.csv
    cfg = load_config(args.config, overrides=overrides)
    reports, tables = suites.run(cfg)
    doc = to_document(reports, cfg.as_dict(), cfg.seed, suites.backend())
    write_json(cfg["output.json"], doc)
    if cfg["output.csv"]:
        out = Path(cfg["output.csv"])
        write_csv(out / "checks.csv", [r.as_dict() for r in reports], CHECK_COLUMNS)
        if "appendix" in tables:
            write_csv(out / "appendix.csv", tables["appendix"], APPENDIX_COLUMNS)
    if not args.quiet:
        sys.stdout.write(summarize(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_summarize(args) -> int:
    reports = read_json(args.inp)
    sys.stdout.write(summarize(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_summarize(args)
    except (ConfigError, ReportError) as exc:
        print(f"volkov-check: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # runtime failure inside a suite
        print(f"volkov-check: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
