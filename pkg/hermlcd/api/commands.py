"""Command handlers behind the ``hermlcd`` entry point.

Every handler takes the parsed arguments, the effective settings and an output
stream, and returns the process exit code. Commands that produce a code write it
as qmat so they can be piped into the next command.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, TextIO

from hermlcd.api.schemas import BoundsTable, ClaimedCell, CodeInfo, CodeParams, VerificationReport
from hermlcd.config import Settings
from hermlcd.core.code import CoordSet, LinearCode, simplex
from hermlcd.core.qmat import dump_matrix, parse_qmat
from hermlcd.services.corpus import Corpus, verify_all
from hermlcd.services.tables import render_tables
from hermlcd.services.weights import WeightEngine, eaqecc_params

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REGRESSION = 2


class InputError(ValueError):
    """Raised when an input file cannot be read."""


def read_code(path: str | None, stdin: TextIO | None = None) -> LinearCode:
    """Load a code from a qmat file, or from stdin for ``-`` / no path.

    Raises:
        InputError: If the file cannot be read.
        QmatFormatError: If the contents are malformed.
        CodeError: If the matrix is zero.
    """
    if path is None or path == "-":
        source = "<stdin>"
        text = (stdin or sys.stdin).read()
    else:
        source = path
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    document = parse_qmat(text, source=source)
    return LinearCode.from_generator(document.matrix, label=document.matrix_id)


def _emit_code(code: LinearCode, args: argparse.Namespace, out: TextIO, default_id: str) -> int:
    out.write(dump_matrix(code.gen, args.id or default_id))
    return EXIT_OK


def _engine(settings: Settings) -> WeightEngine:
    return WeightEngine(settings)


def cmd_info(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    """Dimensions, Gram rank, hull dimension and duality flags."""
    info = CodeInfo.of(read_code(args.input))
    if args.format == "json":
        print(info.model_dump_json(), file=out)
    else:
        print(f"[{info.n},{info.k}]", file=out)
        print(f"gram_rank={info.gram_rank}", file=out)
        print(f"hull_dimension={info.hull_dimension}", file=out)
        print(f"lcd={str(info.lcd).lower()}", file=out)
        print(f"self_orthogonal={str(info.self_orthogonal).lower()}", file=out)
    return EXIT_OK


def cmd_dist(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = read_code(args.input)
    with _engine(settings) as engine:
        d = engine.min_distance(code)
    params = CodeParams(n=code.n, k=code.k, d=d)
    print(params.model_dump_json() if args.format == "json" else str(params), file=out)
    return EXIT_OK


def cmd_wenum(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = read_code(args.input)
    with _engine(settings) as engine:
        enumerator = engine.weight_enumerator(code)
    print(enumerator.model_dump_json() if args.format == "json" else enumerator.polynomial(), file=out)
    return EXIT_OK


def cmd_lcd(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    info = CodeInfo.of(read_code(args.input))
    print(info.model_dump_json() if args.format == "json" else str(info.lcd).lower(), file=out)
    return EXIT_OK


def cmd_dual(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = read_code(args.input)
    return _emit_code(code.hermitian_dual(), args, out, f"{code.label}_dual")


def cmd_puncture(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = read_code(args.input)
    return _emit_code(code.puncture(CoordSet.parse(args.coords)), args, out, f"{code.label}_punctured")


def cmd_shorten(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = read_code(args.input)
    return _emit_code(code.shorten(CoordSet.parse(args.coords)), args, out, f"{code.label}_shortened")


def cmd_extend(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = read_code(args.input)
    return _emit_code(code.extend_parity(), args, out, f"{code.label}_extended")


def cmd_simplex(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    code = simplex(args.k, max_length=settings.max_simplex_length)
    return _emit_code(code, args, out, f"simplex_{args.k}")


def cmd_eaqecc(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    """``[[n, 2k - n + c, d; c]]`` of the input code."""
    code = read_code(args.input)
    with _engine(settings) as engine:
        d = engine.min_distance(code)
    params = eaqecc_params(code, d)
    print(params.model_dump_json() if args.format == "json" else str(params), file=out)
    return EXIT_OK


def _verify(settings: Settings) -> tuple[Corpus, VerificationReport]:
    corpus = Corpus.load(settings.data_path_resolved)
    with _engine(settings) as engine:
        report = verify_all(corpus, engine)
    return corpus, report


def emit_report(
    report: VerificationReport,
    fmt: str,
    claims: list[ClaimedCell] | None = None,
    bounds: BoundsTable | None = None,
) -> str:
    """Render a report.

    JSON mode is the report schema itself. Text mode gives the rendered tables
    (when there is anything to tabulate), one line per discrepancy and the
    summary line.
    """
    if fmt == "json":
        return report.model_dump_json(indent=2)
    sections = []
    if report.records and (claims or (bounds and bounds.entries)):
        sections.append(render_tables(report, claims or [], bounds or BoundsTable()))
    problems = [
        f"{r.id}: " + ", ".join(f"{d.field} expected {d.expected} computed {d.computed}" for d in r.deltas)
        + (f" (ledger {r.ledger})" if r.ledger else "")
        for r in report.records
        if r.status == "discrepancy"
    ]
    if problems:
        sections.append("\n".join(problems))
    if report.bounds_flags:
        sections.append("\n".join(f"bounds: {flag}" for flag in report.bounds_flags))
    sections.append(report.summary.line())
    return "\n\n".join(sections)


def cmd_verify(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    """Verify the whole corpus; exit 2 on a discrepancy outside the ledger."""
    corpus, report = _verify(settings)
    print(emit_report(report, args.format, corpus.claims, corpus.bounds), file=out)
    unledgered = report.summary.unledgered_discrepancies
    if unledgered:
        logger.warning(f"Discrepancies outside the ledger: {', '.join(unledgered)}")
        return EXIT_REGRESSION
    return EXIT_OK


def cmd_tables(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    corpus, report = _verify(settings)
    print(render_tables(report, corpus.claims, corpus.bounds), file=out)
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings, TextIO], int]] = {
    "info": cmd_info,
    "dist": cmd_dist,
    "wenum": cmd_wenum,
    "lcd": cmd_lcd,
    "dual": cmd_dual,
    "puncture": cmd_puncture,
    "shorten": cmd_shorten,
    "extend": cmd_extend,
    "simplex": cmd_simplex,
    "eaqecc": cmd_eaqecc,
    "verify": cmd_verify,
    "tables": cmd_tables,
}
