"""Command-line entry point."""

import argparse
import logging
import sys
from typing import NoReturn, Sequence

from hermlcd import __version__
from hermlcd.api.commands import COMMANDS, EXIT_USAGE, InputError
from hermlcd.config import Settings, get_settings
from hermlcd.core.code import CodeError
from hermlcd.core.gf4 import Gf4Error
from hermlcd.core.qmat import QmatFormatError
from hermlcd.services.corpus import RecipeError
from hermlcd.services.weights import BoundsError, EnumerationLimitError, MacWilliamsError

logger = logging.getLogger(__name__)

DOMAIN_ERRORS = (
    Gf4Error,
    CodeError,
    QmatFormatError,
    RecipeError,
    EnumerationLimitError,
    MacWilliamsError,
    BoundsError,
    InputError,
)


class UsageError(Exception):
    """Raised instead of exiting when the command line is invalid."""


class CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors become exit code 1."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> CliParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=None, help="Output format")
    common.add_argument("--limit", type=int, default=None, help="Exhaustive enumeration limit (dimension)")
    common.add_argument("--workers", type=int, default=None, help="Enumeration thread pool size")
    common.add_argument("--data", default=None, help="Corpus root (default ./data)")
    common.add_argument("--id", default=None, help="Matrix id written on emitted qmat")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging on stderr")

    parser = CliParser(prog="hermlcd", description="Quaternary Hermitian LCD code toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    def add(name: str, help_text: str, takes_input: bool = True, coords: bool = False) -> CliParser:
        sub = subparsers.add_parser(name, help=help_text, parents=[common])
        if takes_input:
            sub.add_argument("input", nargs="?", default="-", help="qmat file ('-' or omitted: stdin)")
        if coords:
            sub.add_argument("--coords", required=True, help="1-based coordinates, e.g. 1,3,6")
        return sub

    add("info", "Dimensions, Gram rank, hull and LCD flags")
    add("dist", "Minimum distance as [n,k,d]")
    add("wenum", "Weight enumerator")
    add("lcd", "Hermitian LCD test")
    add("dual", "Hermitian dual (qmat)")
    add("puncture", "Delete coordinates (qmat)", coords=True)
    add("shorten", "Shorten on coordinates (qmat)", coords=True)
    add("extend", "Append a parity coordinate (qmat)")
    simplex = add("simplex", "Simplex code S_k (qmat)", takes_input=False)
    simplex.add_argument("k", type=int, help="Dimension (>= 2)")
    add("eaqecc", "Entanglement-assisted quantum code parameters")
    add("verify", "Verify the bundled corpus", takes_input=False)
    add("tables", "Render the claimed and bounds tables", takes_input=False)
    return parser


def effective_settings(args: argparse.Namespace) -> Settings:
    """Cached settings with command-line overrides applied."""
    updates = {}
    if args.limit is not None:
        updates["exhaustive_limit"] = args.limit
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.data is not None:
        updates["data_dir"] = args.data
    if args.format is not None:
        updates["report_format"] = args.format
    return get_settings().model_copy(update=updates)


def configure_logging(settings: Settings, verbosity: int) -> None:
    level = {0: settings.log_level.upper(), 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command (entry point for CLI) and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE

    settings = effective_settings(args)
    args.format = settings.report_format
    configure_logging(settings, args.verbose)
    logger.debug(f"Running {args.command} (limit {settings.exhaustive_limit}, workers {settings.workers})")

    try:
        return COMMANDS[args.command](args, settings, sys.stdout)
    except DOMAIN_ERRORS as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"hermlcd {args.command}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(run())
