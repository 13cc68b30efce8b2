"""qmat codec: plain-text GF(4) matrices as transcribed from printed displays.

Format::

    # comment lines start with '#'
    qmat <rows> <cols> <id> [transposed]
    0 1 1 1 1
    1 0 1 2 3

The header gives the dimensions of the rows as they appear in the file. With the
``transposed`` flag the printed block is ``A^T`` and the loaded matrix is ``A``.
"""

import logging
from pathlib import Path
from typing import NamedTuple

from hermlcd.core.gf4 import Gf4Error, Gf4Matrix

logger = logging.getLogger(__name__)

MAGIC = "qmat"
TRANSPOSED_FLAG = "transposed"


class QmatFormatError(ValueError):
    """Raised for malformed qmat text."""


class QmatDocument(NamedTuple):
    """A parsed qmat file."""

    matrix: Gf4Matrix
    matrix_id: str
    transposed: bool


def parse_qmat(text: str, source: str = "<text>") -> QmatDocument:
    """Parse qmat text.

    Args:
        text: File contents.
        source: Name used in error messages.

    Returns:
        The parsed document; ``matrix`` is already un-transposed.

    Raises:
        QmatFormatError: On a missing or bad header, bad digits, ragged rows or a
            dimension mismatch.
    """
    lines = [
        (number, line.strip())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise QmatFormatError(f"{source}: empty qmat input")

    header_line, header = lines[0]
    fields = header.split()
    if len(fields) not in (4, 5) or fields[0] != MAGIC:
        raise QmatFormatError(f"{source}:{header_line}: expected 'qmat <rows> <cols> <id> [transposed]'")
    try:
        rows, cols = int(fields[1]), int(fields[2])
    except ValueError as exc:
        raise QmatFormatError(f"{source}:{header_line}: non-integer dimensions") from exc
    if rows < 1 or cols < 1:
        raise QmatFormatError(f"{source}:{header_line}: dimensions must be positive")
    matrix_id = fields[3]
    transposed = len(fields) == 5
    if transposed and fields[4] != TRANSPOSED_FLAG:
        raise QmatFormatError(f"{source}:{header_line}: unknown flag {fields[4]!r}")

    body = lines[1:]
    if len(body) != rows:
        raise QmatFormatError(f"{source}: header declares {rows} rows, found {len(body)}")

    digits: list[list[int]] = []
    for number, line in body:
        tokens = line.split()
        if len(tokens) != cols:
            raise QmatFormatError(f"{source}:{number}: expected {cols} entries, found {len(tokens)}")
        bad = [t for t in tokens if t not in ("0", "1", "2", "3")]
        if bad:
            raise QmatFormatError(f"{source}:{number}: bad digit(s) {bad}")
        digits.append([int(t) for t in tokens])

    try:
        matrix = Gf4Matrix.from_digits(digits)
    except Gf4Error as exc:
        raise QmatFormatError(f"{source}: {exc}") from exc
    if transposed:
        matrix = matrix.transpose()
    logger.debug(f"Parsed {matrix_id} from {source}: {matrix.rows}x{matrix.cols}")
    return QmatDocument(matrix, matrix_id, transposed)


def load_matrix(text: str) -> Gf4Matrix:
    """Parse qmat text into the (un-transposed) matrix."""
    return parse_qmat(text).matrix


def read_qmat(path: Path) -> QmatDocument:
    """Read and parse a qmat file.

    Raises:
        OSError: If the file cannot be read.
        QmatFormatError: If its contents are malformed.
    """
    return parse_qmat(Path(path).read_text(encoding="utf-8"), source=str(path))


def dump_matrix(matrix: Gf4Matrix, matrix_id: str = "code") -> str:
    """Serialize a matrix as qmat text (never transposed), newline-terminated."""
    if matrix.rows < 1:
        raise QmatFormatError("Cannot serialize a matrix with no rows")
    if not matrix_id or any(c.isspace() for c in matrix_id):
        raise QmatFormatError(f"Invalid matrix id: {matrix_id!r}")
    lines = [f"{MAGIC} {matrix.rows} {matrix.cols} {matrix_id}"]
    lines.extend(" ".join(str(v) for v in row) for row in matrix.to_digits())
    return "\n".join(lines) + "\n"
