"""Command-line entry point: `regsentry run --config <path>`."""

from __future__ import annotations

import argparse
import logging
import sys

from .pipeline.phases import run_all
from .pipeline.report import EXIT_ERROR
from .shared.config import load_config
from .shared.errors import PipelineError, RegSentryError
from .shared.logger import configure_logging, log


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regsentry", description="Detect regression faults between two program versions.")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the four analysis phases and write the report")
    run.add_argument("--config", required=True, help="path to the key = value configuration file")
    run.add_argument("--resume-from", type=int, choices=[1, 2, 3, 4], default=1)
    run.add_argument("--emit-cnf", action="store_true", help="dump one DIMACS file per solver query")
    run.add_argument("--format", choices=["json", "text", "both"], default="text", help="report printed on stdout")
    run.add_argument("--output-dir", help="override output_dir from the configuration")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        cfg = load_config(args.config)
        if args.output_dir:
            cfg = cfg.with_output_dir(args.output_dir)
        report = run_all(cfg, resume_from=args.resume_from, emit_cnf=args.emit_cnf)
    except PipelineError as exc:
        log(f"{exc.phase} failed: {exc.cause}", filter_tag="REGSENTRY", level=logging.ERROR)
        return EXIT_ERROR
    except RegSentryError as exc:
        log(f"configuration: {exc}", filter_tag="REGSENTRY", level=logging.ERROR)
        return EXIT_ERROR
    if args.format in ("text", "both"):
        sys.stdout.write(report.to_text())
    if args.format in ("json", "both"):
        sys.stdout.write(report.to_json())
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
