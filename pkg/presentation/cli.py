"""
Command-line interface of the Web Reputation Index system.

Each subcommand maps to one Option, and each Option wraps one business logic
command:

    collect   build a snapshot from web sources (cassette-aware)
    validate  print snapshot validation warnings
    compute   run the index pipeline and write results
    rank      print the ranking, or its top/bottom K
    stats     print descriptive statistics and distribution data
    fixture   export the embedded appendix table

Result data goes to ``--output`` or, without it, to the output stream. Status
lines, warnings and errors go to the error stream.

Exit status: 0 on success (warnings allowed), 1 on I/O failure, 2 on usage,
parse, schema or data errors.

Example:
    $ wri fixture --format csv --output appendix.csv
    $ wri rank --input appendix.csv --top 10
    $ wri compute --input universities.csv --population-mode text --output results.json --format json
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from business_logic.commands import (
    CollectCommand,
    ComputeCommand,
    FixtureCommand,
    RankCommand,
    StatsCommand,
    ValidateCommand,
)
from persistence.errors import UsageError
from persistence.models import (
    CassetteMode,
    DataFormat,
    PopulationMode,
    ProbeLocation,
    RunConfig,
    StdConvention,
)
from persistence.settings import DEFAULT_PARALLELISM
from presentation.options import Option

logger = logging.getLogger(__name__)

USAGE_EXIT = 2

options = {
    "collect": Option("collect", CollectCommand()),
    "validate": Option("validate", ValidateCommand()),
    "compute": Option("compute", ComputeCommand()),
    "rank": Option("rank", RankCommand()),
    "stats": Option("stats", StatsCommand()),
    "fixture": Option("fixture", FixtureCommand()),
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so ``main`` owns the exit status."""

    def error(self, message: str) -> None:
        raise UsageError(message)


def parse_probe_location(text: str) -> ProbeLocation:
    """Parse ``ID=WEIGHT`` into a ProbeLocation."""
    probe_id, separator, weight = text.partition("=")
    if not separator or not probe_id.strip():
        raise argparse.ArgumentTypeError(f"expected ID=WEIGHT, got {text!r}")
    try:
        return ProbeLocation(probe_id=probe_id.strip(), weight=float(weight))
    except (ValueError, ValidationError):
        raise argparse.ArgumentTypeError(f"invalid probe weight in {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", type=Path, help="input file (snapshot, entities or results)")
    common.add_argument("--output", type=Path, help="output file; the output stream when absent")
    common.add_argument(
        "--format", choices=[f.value for f in DataFormat], default=DataFormat.CSV.value
    )
    common.add_argument("--indicators", type=Path, help="JSON indicator set replacing the default one")
    common.add_argument("--label", default="", help="snapshot or ranking label")
    common.add_argument("--decimal-comma", action="store_true", help="print 0,449508 instead of 0.449508")
    common.add_argument("--verbose", action="store_true", help="debug logging on the error stream")

    pipeline = _Parser(add_help=False)
    pipeline.add_argument(
        "--population-mode",
        choices=[m.value for m in PopulationMode],
        default=PopulationMode.FORMULA_LITERAL.value,
        help="divide WRI by the raw population (formula) or its min-max normalized value (text)",
    )
    pipeline.add_argument(
        "--std", choices=[s.value for s in StdConvention], default=StdConvention.POPULATION.value
    )

    fixture_input = _Parser(add_help=False)
    fixture_input.add_argument(
        "--from-fixture", action="store_true", help="use the embedded appendix values as input"
    )

    parser = _Parser(prog="wri", description="Web Reputation Index of universities")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    collect = subparsers.add_parser("collect", parents=[common], help="collect a snapshot")
    collect.add_argument("--sources", type=Path, help="JSON list of source descriptors")
    collect.add_argument("--cassette", type=Path, help="cassette directory")
    mode = collect.add_mutually_exclusive_group()
    mode.add_argument("--record", action="store_true", help="record live responses into the cassette")
    mode.add_argument("--replay", action="store_true", help="answer from the cassette only")
    collect.add_argument("--parallelism", type=int, default=DEFAULT_PARALLELISM)
    collect.add_argument("--no-probe", action="store_true", help="skip latency probing")
    collect.add_argument("--probe-attempts", type=int, default=3)
    collect.add_argument(
        "--probe-location",
        type=parse_probe_location,
        action="append",
        metavar="ID=WEIGHT",
        help="probe location and weight (repeatable; weights must sum to 1)",
    )

    subparsers.add_parser("validate", parents=[common], help="validate a snapshot")

    compute = subparsers.add_parser(
        "compute", parents=[common, pipeline, fixture_input], help="compute the index"
    )
    compute.add_argument(
        "--compare-modes", action="store_true", help="report Kendall's tau between both population modes"
    )

    rank = subparsers.add_parser("rank", parents=[common, fixture_input], help="print the ranking")
    rank.add_argument("--top", type=int, metavar="K")
    rank.add_argument("--bottom", type=int, metavar="K")

    stats = subparsers.add_parser(
        "stats", parents=[common, pipeline, fixture_input], help="descriptive statistics"
    )
    stats.add_argument("--bins", type=int, default=10)
    stats.add_argument("--histogram", type=Path, help="histogram CSV output")
    stats.add_argument("--scatter", type=Path, help="ordinal scatter CSV output")

    subparsers.add_parser("fixture", parents=[common, pipeline], help="export the appendix table")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Translate parsed arguments into a RunConfig.

    Raises:
        UsageError: If a value violates the configuration constraints.
    """
    fields = {
        "input_path": args.input,
        "output_path": args.output,
        "format": DataFormat(args.format),
        "indicators_path": args.indicators,
        "label": args.label,
        "decimal_comma": args.decimal_comma,
    }
    if hasattr(args, "population_mode"):
        fields["population_mode"] = PopulationMode(args.population_mode)
        fields["std_convention"] = StdConvention(args.std)
    if getattr(args, "from_fixture", False):
        fields["from_fixture"] = True
    if args.command == "collect":
        fields.update(
            sources_path=args.sources,
            cassette_dir=args.cassette,
            cassette_mode=(
                CassetteMode.RECORD
                if args.record
                else CassetteMode.REPLAY if args.replay else CassetteMode.PASSTHROUGH
            ),
            parallelism=args.parallelism,
            probe_enabled=not args.no_probe,
            probe_attempts=args.probe_attempts,
        )
        if args.probe_location:
            fields["probe_locations"] = tuple(args.probe_location)
    elif args.command == "compute":
        fields["compare_modes"] = args.compare_modes
    elif args.command == "rank":
        fields.update(top=args.top, bottom=args.bottom)
    elif args.command == "stats":
        fields.update(bins=args.bins, histogram_path=args.histogram, scatter_path=args.scatter)

    try:
        config = RunConfig(**fields)
        if config.probe_enabled and args.command == "collect":
            config.probe_plan()
        return config
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
            for error in e.errors()
        )
        raise UsageError(details) from None


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv``, run the selected subcommand and return the exit status.

    Args:
        argv (Optional[Sequence[str]]): Arguments without the program name;
            ``sys.argv[1:]`` when None.

    Returns:
        int: 0 on success, 1 on I/O failure, 2 on usage or data errors.
    """
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        config = build_config(args)
    except UsageError as e:
        print(f"❌ Usage error: {e}", file=sys.stderr)
        return USAGE_EXIT

    logger.debug("running %s with %s", args.command, config)
    return options[args.command].choose(config)
