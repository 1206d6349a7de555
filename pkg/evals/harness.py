#!/usr/bin/env python
"""Unified experiment harness.

This is the main entry point for running experiments. Every command builds an
ExperimentConfig from its flags, runs the owning task runner and writes a
versioned JSON (or CSV) report.

Usage:
    # Bogolyubov-Ruzsa pipeline on 200 small-doubling sets in F_2^4
    python -m evals.harness brz-verify --p 2 --n 4 --instances 200 --seed 7

    # Tampering distance of the identity pair
    python -m evals.harness nmc-distance --p 2 --n 1 --family identity

    # List available commands
    python -m evals.harness --list

Exit status:
    0  success
    1  a run or an instance failed (the report is still written, with error records)
    2  usage error (bad flags or an invalid config)
"""

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path

from pydantic import ValidationError

from evals.results.schemas import ErrorRecord, Report, quantify
from evals.schemas.config import Command, ExperimentConfig
from evals.tasks.additive.runner import (
    run_brz_verify,
    run_croot_trial,
    run_plunnecke_scan,
    run_shiftset_scan,
    run_subgroup_scan,
    run_thespace_scan,
)
from evals.tasks.context import RunContext
from evals.tasks.lintest.runner import run_lintest
from evals.tasks.nmc.runner import run_evasive_search, run_nmc_distance, run_nmc_sweep
from evals.tasks.spectral.runner import run_chang_scan
from src.errors import LabError

logger = logging.getLogger(__name__)


# Registry of available commands
COMMANDS: dict[Command, tuple[Callable[[RunContext], None], str]] = {
    Command.BRZ_VERIFY: (run_brz_verify, "Find a large subspace inside 2A - 2A"),
    Command.CHANG_SCAN: (run_chang_scan, "Check span dimension of large spectra against Chang's bound"),
    Command.PLUNNECKE_SCAN: (run_plunnecke_scan, "Check |kA - lA| <= K^(k+l)|A|"),
    Command.SHIFTSET_SCAN: (run_shiftset_scan, "Measure gentle shift sets under t-fold sums"),
    Command.CROOT_TRIAL: (run_croot_trial, "Sample almost-periods of rho_A * 1_{A-A}"),
    Command.SUBGROUP_SCAN: (run_subgroup_scan, "Check |A - A| = |A| exactly for cosets, over all subsets"),
    Command.THESPACE_SCAN: (run_thespace_scan, "Compare walk counts with their V-shifted version"),
    Command.NMC_DISTANCE: (run_nmc_distance, "Distance of a tampered code to the (u, au+b) family"),
    Command.NMC_SWEEP: (run_nmc_sweep, "Family distance over random pairs or growing n"),
    Command.LINTEST: (run_lintest, "Linearity test acceptance and agreement"),
    Command.EVASIVE_SEARCH: (run_evasive_search, "Search affine-evasive alphabets in F_p"),
}

# Flags that steer the harness itself and are not part of the config
HARNESS_FLAGS = {"verbose", "no_progress", "list"}


def _add_common(sp: argparse.ArgumentParser) -> None:
    group = sp.add_argument_group("run")
    group.add_argument("--p", type=int, help="Field characteristic, prime (default: 2)")
    group.add_argument("--n", type=int, help="Dimension of F_p^n (default: 3)")
    group.add_argument("--seed", type=int, help="Seed for the Philox streams (default: 0)")
    group.add_argument("--budget", type=int, help="Largest exhaustive search (default: 10^6)")
    group.add_argument("--output", "-o", type=Path, help="Report path (default: stdout)")
    group.add_argument("--format", choices=["json", "csv"], help="Report format (default: json)")
    group.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    group.add_argument("--no-progress", action="store_true", help="Hide progress bars")


def _add_sets(sp: argparse.ArgumentParser) -> None:
    group = sp.add_argument_group("instances")
    group.add_argument("--instances", type=int, help="Number of seeded instances (default: 20)")
    group.add_argument(
        "--instance-kind",
        choices=["small-doubling", "random", "cosets", "file"],
        help="How sets are produced (default depends on the command)",
    )
    group.add_argument("--set-file", type=Path, help="Set file for --instance-kind file")
    group.add_argument("--set-size", type=int, help="Size of random sets (default: uniform)")
    group.add_argument("--max-doubling", type=float, help="Doubling bound for small-doubling sets (default: 2)")


def _add_alphabet(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--alphabet-size", type=int, help="Message alphabet size (default: 2)")


def _add_lp(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "--family",
        choices=["identity", "constant", "affine", "permutation", "random", "lifted"],
        help="Tampering family (default: identity)",
    )
    sp.add_argument("--lp-method", choices=["exact", "highs"], help="LP solver (default: exact for small p)")
    _add_alphabet(sp)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="additive-lab",
        description="Seeded experiments in additive combinatorics over F_p^n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Bogolyubov-Ruzsa on small-doubling sets
  additive-lab brz-verify --p 2 --n 4 --instances 200 --seed 7

  # Every coset of F_3^4
  additive-lab brz-verify --p 3 --n 4 --instance-kind cosets

  # Exact tampering distance, written to a file
  additive-lab nmc-distance --p 2 --n 1 --family identity -o identity.json

  # Linearity test with no corruption
  additive-lab lintest --p 2 --n 2 --corrupt 0
        """,
    )
    parser.add_argument("--list", "-l", action="store_true", help="List available commands and exit")
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    for command, (_, help_text) in COMMANDS.items():
        sp = subparsers.add_parser(command.value, help=help_text, description=help_text)
        _add_common(sp)
        if command in (
            Command.BRZ_VERIFY,
            Command.PLUNNECKE_SCAN,
            Command.SHIFTSET_SCAN,
            Command.CROOT_TRIAL,
            Command.CHANG_SCAN,
        ):
            _add_sets(sp)

        if command == Command.BRZ_VERIFY:
            sp.add_argument("--thresholds", type=float, nargs="+", help="Gentle-set thresholds (default: 0.98 0.99 0.999)")
            sp.add_argument("--quasi-pfr", action="store_true", default=None, help="Also report the coset piece B")
            sp.add_argument("--freiman", action="store_true", default=None, help="Use the Freiman-reduced pipeline")
            sp.add_argument("--order", type=int, help="Freiman order, at least 4 (default: 12)")
        elif command == Command.PLUNNECKE_SCAN:
            sp.add_argument("--kmax", type=int, help="Largest k + l (default: 4)")
        elif command == Command.SHIFTSET_SCAN:
            sp.add_argument("--thresholds", type=float, nargs="+", help="First value builds X (default: 0.98)")
            sp.add_argument("--threshold", type=float, help="Target for t-fold sums (default: 0.9)")
            sp.add_argument("--t-max", type=int, help="Largest t (default: 3)")
        elif command == Command.CROOT_TRIAL:
            sp.add_argument("--q", type=float, help="Norm exponent (default: 2)")
            sp.add_argument("--eps", type=float, help="Accuracy (default: 0.25)")
            sp.add_argument("--C", type=float, help="Slack constant (default: 2)")
            sp.add_argument("--trials", type=int, help="Sampled tuples per instance (default: 200)")
        elif command == Command.CHANG_SCAN:
            sp.add_argument("--gammas", type=float, nargs="+", help="Spectrum thresholds (default: 0.3 0.5 0.8)")
            sp.add_argument("--log-base", choices=["e", "2"], help="Logarithm base of the bound (default: e)")
        elif command == Command.THESPACE_SCAN:
            sp.add_argument("--instances", type=int, help="Number of seeded instances (default: 20)")
            sp.add_argument("--set-size", type=int, help="Size of A (default: uniform)")
            sp.add_argument("--t-max", type=int, help="t is drawn from 1..t-max (default: 3)")
        elif command == Command.NMC_DISTANCE:
            _add_lp(sp)
        elif command == Command.NMC_SWEEP:
            _add_lp(sp)
            sp.add_argument("--instances", type=int, help="Random pairs for non-lifted families (default: 20)")
            sp.add_argument("--n-values", type=int, nargs="+", help="Dimensions for --family lifted (default: 1 2 3)")
        elif command == Command.LINTEST:
            sp.add_argument("--corrupt", type=float, nargs="+", help="Corruption rates (default: 0)")
            sp.add_argument("--trials", type=int, help="Tables per rate (default: 200)")
            sp.add_argument("--fn-file", type=Path, help="Test this function file instead of sweeping")
            sp.add_argument(
                "--agreement-mode",
                choices=["auto", "exhaustive", "sampling"],
                help="Linear agreement search for --fn-file (default: auto)",
            )
            sp.add_argument("--samples", type=int, help="Samples for the sampling mode (default: 1000)")
        elif command == Command.EVASIVE_SEARCH:
            _add_alphabet(sp)
            sp.add_argument("--search-mode", choices=["exhaustive", "greedy"], help="Search (default: exhaustive)")
            sp.add_argument("--instances", type=int, help="Greedy restarts (default: 20)")

    return parser


def list_commands() -> None:
    """Print available commands."""
    print("Available commands:")
    print("-" * 60)
    for command, (_, description) in COMMANDS.items():
        print(f"  {command.value:16} {description}")
    print("-" * 60)
    print("\nUsage: additive-lab <command> [options]")
    print("Run with <command> --help for command-specific options.")


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Build the config from the flags that were given.

    Raises:
        ValidationError: If a value is invalid
    """
    values = {
        key: value
        for key, value in vars(args).items()
        if key not in HARNESS_FLAGS and value is not None
    }
    return ExperimentConfig(**values)


def run(config: ExperimentConfig, progress: bool = False) -> Report:
    """Run one experiment and build its report.

    A LabError (or an unreadable input file) that escapes the runner ends the run; the records collected
    so far are kept and the error is recorded.
    """
    runner, _ = COMMANDS[config.command]
    ctx = RunContext(config, progress=progress)
    logger.info(f"Running {config.command.value} on F_{config.p}^{config.n} (seed {config.seed})")

    ctx.timer.start()
    try:
        runner(ctx)
    except (LabError, OSError) as e:
        logger.error(f"{config.command.value} stopped: {type(e).__name__}: {e}")
        ctx.errors.append(ErrorRecord.from_exception(e))
    total_ms = ctx.timer.stop()

    return Report(
        command=config.command.value,
        config=config.model_dump(mode="json"),
        rng=ctx.rng_info(),
        records=ctx.ordered_records(),
        summary=quantify(ctx.summary),
        errors=ctx.errors,
        timing_ms={**ctx.timer.stages, "total": total_ms},
    )


def write_report(report: Report, config: ExperimentConfig) -> None:
    text = report.render(config.format)
    if config.output is None:
        sys.stdout.write(text)
        return
    config.output.parent.mkdir(parents=True, exist_ok=True)
    config.output.write_text(text)
    logger.info(f"Report saved to {config.output}")


def print_summary(report: Report) -> None:
    """Human summary on stderr, so stdout stays a clean report."""
    out = sys.stderr
    print("=" * 60, file=out)
    print(f"{report.command}: {len(report.records)} records, {len(report.errors)} errors", file=out)
    for key, value in report.summary.items():
        if isinstance(value, dict) and "kind" in value:
            value = value["value"]
        elif isinstance(value, (dict, list)):
            continue
        print(f"  {key:24} {value}", file=out)
    for error in report.errors:
        where = "run" if error.instance is None else f"instance {error.instance}"
        print(f"  ERROR ({where}) {error.error_type}: {error.message}", file=out)
    print(f"  {'total time':24} {report.timing_ms.get('total', 0.0):.0f}ms", file=out)
    print("=" * 60, file=out)


def main(argv: list[str] | None = None) -> int:
    """Main harness entry point.

    Returns:
        Exit code (0 success, 1 run failure, 2 usage error)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    if args.list:
        list_commands()
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        print("Error: a command is required (see --list)", file=sys.stderr)
        return 2

    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(f"Error: invalid configuration\n{e}", file=sys.stderr)
        return 2

    report = run(config, progress=not args.no_progress)
    try:
        write_report(report, config)
    except OSError as e:
        logger.error(f"Could not write report: {e}")
        return 1
    print_summary(report)
    return 0 if report.success else 1


if __name__ == "__main__":
    sys.exit(main())
