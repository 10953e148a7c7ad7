"""
Command-line entry point for the modular entropy toolkit
"""
import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from config import get_settings, set_settings
from core.errors import ReportIOError, SchemaError
from models.schemas import ErrorResponse, JobSpec, Report
from tools.report_io import dumps, read_json, write_csv, write_json
from workflows import run_pipeline

logger = logging.getLogger(__name__)

COMMANDS = ["entropy-profile", "modular", "one-particle", "fock-verify", "geometry-sweep", "acceptance"]

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _grid(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modular-entropy",
        description="Numerical checks for vector entropy of standard subspaces",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", help="JSON descriptor for the command")
    parser.add_argument("--output", help="report path (.json, or .csv for entropy-profile rows)")
    parser.add_argument("--seed", type=int, help="seed for randomised suites and sampling")
    parser.add_argument("--tol", type=float, help="algebraic tolerance")
    parser.add_argument("--grid", type=_grid, help="λ grid, comma separated")
    parser.add_argument("--cutoff", type=int, help="Fock cutoff N")
    parser.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    return parser


def load_job(args: argparse.Namespace) -> JobSpec:
    payload = read_json(args.input) if args.input else {}
    try:
        return JobSpec(
            command=args.command,
            input=args.input,
            output=args.output,
            seed=args.seed,
            tol=args.tol,
            grid=args.grid,
            cutoff=args.cutoff,
            samples=args.samples,
            payload=payload,
        )
    except ValidationError as e:
        raise SchemaError(f"invalid job: {e}", {"errors": e.errors(include_url=False)}) from e


def write_outputs(job: JobSpec, report: Report) -> None:
    payload = report.model_dump()
    if not job.output:
        sys.stdout.write(dumps(payload))
        return
    output = Path(job.output)
    if job.command == "entropy-profile" and output.suffix == ".csv":
        profile = report.results.get("ray.entropy_profile", {})
        write_csv(output, profile.get("rows", []), ["lambda", "S", "dS", "d2S", "convexity_margin"])
        output = output.with_suffix(".json")
    write_json(output, payload)


def run(job: JobSpec) -> Report:
    """Apply the job's settings overrides and run the pipeline"""
    previous = get_settings()
    set_settings(previous.override(**job.overrides()))
    try:
        return asyncio.run(run_pipeline(job))
    finally:
        set_settings(previous)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    logging.basicConfig(level=logging.INFO)
    args = build_parser().parse_args(argv)
    try:
        job = load_job(args)
        report = run(job)
        write_outputs(job, report)
    except (SchemaError, ReportIOError) as e:
        error = ErrorResponse(error=type(e).__name__, details=str(e), step=args.command)
        sys.stderr.write(dumps(error.model_dump()))
        logger.error(f"{args.command} aborted: {e}")
        return EXIT_USAGE
    failed = [v.name for v in report.verdicts if not v.passed]
    if failed:
        logger.warning(f"{len(failed)} verdicts failed: {failed}")
        return EXIT_FAIL
    logger.info(f"{args.command} passed {len(report.verdicts)} verdicts")
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
