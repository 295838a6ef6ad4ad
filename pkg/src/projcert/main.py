"""Application entry point: the `projcert` command line.

Subcommands:
  1. `projcert decide FILE|-`: certificate for the problem's combination.
  2. `projcert certify FILE|-`: decision plus numerical checks.
  3. `projcert oracle-compare FILE|-`: closed-form projections vs oracles.
  4. `projcert reproduce NAME|--all|--problem FILE`: regression fixtures.
  5. `projcert fixtures`: list the fixtures.

JSON goes to stdout, logs to stderr. Exit codes: 0 IsProjector / pass,
1 NotProjector / mismatch, 2 Inconclusive, 64 input error.
"""

import argparse
import logging
import sys
from pathlib import Path

from .commands import NUMERICAL_ERRORS, CommandResult

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 64
EXIT_INCONCLUSIVE = 2


def _sampling_flags() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, help="Random seed for all sampling")
    parent.add_argument("--samples", type=int, dest="n_samples", help="Number of Gaussian samples")
    parent.add_argument("--scale", type=float, help="Standard deviation of the samples")
    parent.add_argument("--atol", type=float, help="Absolute tolerance")
    parent.add_argument("--rtol", type=float, help="Relative tolerance")
    parent.add_argument("--fd-step", type=float, dest="fd_step", help="Finite-difference step")
    output = parent.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="Compact JSON (default)")
    output.add_argument("--pretty", action="store_true", help="Indented JSON")
    parent.add_argument("--output", type=Path, help="Also write the JSON document to PATH")
    parent.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _sampling_flags()
    parser = argparse.ArgumentParser(
        prog="projcert",
        description="Decide whether combinations of projectors onto convex sets are projectors",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("decide", "Certify or refute a combination"),
        ("certify", "Decide and run the numerical checks on the combination"),
        ("oracle-compare", "Compare each set's projection against an independent oracle"),
    ):
        cmd = sub.add_parser(name, parents=[parent], help=help_text)
        cmd.add_argument("problem", metavar="FILE", help="Problem file, or - for stdin")

    rep = sub.add_parser("reproduce", parents=[parent], help="Run regression fixtures")
    target = rep.add_mutually_exclusive_group(required=True)
    target.add_argument("name", nargs="?", metavar="NAME", help="Fixture name")
    target.add_argument("--all", action="store_true", help="Run every fixture")
    target.add_argument("--problem", metavar="FILE", help="Problem file with task 'reproduce'")

    sub.add_parser("fixtures", parents=[parent], help="List the regression fixtures")
    return parser


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=logging.WARNING,
        stream=sys.stderr,
    )
    if verbose:
        logging.getLogger("projcert").setLevel(logging.DEBUG)


def _dispatch(args: argparse.Namespace) -> CommandResult:
    # Imported here so a configuration error is reported before any work
    from .config import config
    from .sampling import SampleConfig

    if not args.verbose:
        logging.getLogger("projcert").setLevel(config.log_level)
    overrides = {
        name: getattr(args, name)
        for name in ("seed", "n_samples", "scale", "atol", "rtol", "fd_step")
    }

    def settings(base: SampleConfig) -> SampleConfig:
        return base.with_overrides(**overrides)

    defaults = config.sample_config()

    if args.command == "fixtures":
        from .commands.reproduce import run_list_fixtures

        return run_list_fixtures()

    from .problem import load_problem

    if args.command == "reproduce":
        from .commands.reproduce import run_reproduce

        if args.problem is not None:
            problem = load_problem(args.problem, "reproduce")
            if problem.task != "reproduce":
                raise ValueError(f"problem task is {problem.task!r}, expected 'reproduce'")
            return run_reproduce(problem.fixture, settings(problem.sample_config(defaults)))
        if not args.all:
            # Unknown names raise UnknownFixture before anything runs
            from .fixtures import get_fixture

            get_fixture(args.name)
        return run_reproduce(None if args.all else args.name, settings(defaults))

    problem = load_problem(args.problem, args.command)
    if problem.task != args.command:
        raise ValueError(f"problem task is {problem.task!r}, but the command is {args.command!r}")
    cfg = settings(problem.sample_config(defaults))

    if args.command == "decide":
        from .commands.decide import run_decide

        return run_decide(problem, cfg)
    if args.command == "certify":
        from .commands.certify import run_certify

        return run_certify(problem, cfg)
    from .commands.oracle_compare import run_oracle_compare

    return run_oracle_compare(problem, cfg)


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, run the command, print its JSON; return the exit code."""
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)

    from .utils import atomic_write_json, dump_json

    try:
        result = _dispatch(args)
    except NUMERICAL_ERRORS as e:
        logger.warning("%s gave up: %s", args.command, e)
        result = CommandResult(
            {"task": args.command, "verdict": "Inconclusive", "diagnostics": str(e)},
            EXIT_INCONCLUSIVE,
        )
    except ValueError as e:
        logger.error("Input error: %s", e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    print(dump_json(result.document, pretty=args.pretty))
    if args.output is not None:
        atomic_write_json(args.output, result.document)
        logger.debug("Wrote %s", args.output)
    return result.exit_code


def main() -> None:
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
