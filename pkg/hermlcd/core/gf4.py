"""Exact arithmetic over GF(4) and the dense linear algebra built on it.

Elements use galois' integer representation of GF(2^2) = GF(2)[x]/(x^2 + x + 1):
``0, 1, 2, 3`` are ``0, 1, ω, ϖ`` with ``ω = x`` and ``ϖ = ω^2 = 1 + ω``. The same
digits are used verbatim by the qmat files, so printed matrices load unchanged.
Bit 0 of an element is its ``1`` coordinate and bit 1 its ``ω`` coordinate, which
makes addition a plain XOR.
"""

from __future__ import annotations

import functools
import logging
from enum import IntEnum
from typing import Iterable, NamedTuple, Sequence

import galois
import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

GF4 = galois.GF(4)


class Gf4Error(ValueError):
    """Raised for malformed GF(4) elements or matrices."""


class Gf4Element(IntEnum):
    """One of the four field symbols, valued by its galois integer representation."""

    ZERO = 0
    ONE = 1
    OMEGA = 2
    OMEGABAR = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = {
    Gf4Element.ZERO: "0",
    Gf4Element.ONE: "1",
    Gf4Element.OMEGA: "ω",
    Gf4Element.OMEGABAR: "ϖ",
}

# Operation tables, derived once from the galois field so they cannot drift from it.
_ELEMENTS = GF4.elements
_ADD_TABLE = (_ELEMENTS[:, np.newaxis] + _ELEMENTS[np.newaxis, :]).view(np.ndarray)
_MUL_TABLE = (_ELEMENTS[:, np.newaxis] * _ELEMENTS[np.newaxis, :]).view(np.ndarray)
_CONJ_TABLE = (_ELEMENTS**2).view(np.ndarray)


def _element(value: int | Gf4Element) -> Gf4Element:
    try:
        return Gf4Element(int(value))
    except ValueError as exc:
        raise Gf4Error(f"Not a GF(4) element: {value!r}") from exc


def add(a: int | Gf4Element, b: int | Gf4Element) -> Gf4Element:
    """Field addition (characteristic 2, so every element is its own negative)."""
    return Gf4Element(int(_ADD_TABLE[_element(a), _element(b)]))


def mul(a: int | Gf4Element, b: int | Gf4Element) -> Gf4Element:
    """Field multiplication."""
    return Gf4Element(int(_MUL_TABLE[_element(a), _element(b)]))


def conj(a: int | Gf4Element) -> Gf4Element:
    """Frobenius conjugation ``x -> x^2``; swaps ω and ϖ and fixes 0 and 1."""
    return Gf4Element(int(_CONJ_TABLE[_element(a)]))


def inverse(a: int | Gf4Element) -> Gf4Element:
    """Multiplicative inverse. In GF(4)* every element satisfies ``x^3 = 1`` so ``x^-1 = x^2``.

    Raises:
        Gf4Error: If ``a`` is zero.
    """
    element = _element(a)
    if element is Gf4Element.ZERO:
        raise Gf4Error("Zero has no multiplicative inverse")
    return conj(element)


class RowEchelon(NamedTuple):
    """Result of :meth:`Gf4Matrix.rref`."""

    matrix: Gf4Matrix
    rank: int
    pivots: list[int]  # 1-based pivot columns


class Gf4Matrix:
    """Immutable dense matrix over GF(4).

    Wraps a read-only ``galois`` array. A matrix always has at least one column;
    zero rows only arise as the null space of a full-column-rank matrix.
    """

    def __init__(self, entries: npt.ArrayLike | galois.FieldArray):
        """Initialize the matrix.

        Args:
            entries: A 2-D array of digits 0..3 (or a GF(4) field array).

        Raises:
            Gf4Error: If the entries are not a 2-D array of GF(4) digits.
        """
        try:
            array = GF4(np.array(entries, dtype=np.int64) if not isinstance(entries, GF4) else entries.copy())
        except (TypeError, ValueError) as exc:
            raise Gf4Error(f"Invalid GF(4) matrix entries: {exc}") from exc
        if array.ndim != 2:
            raise Gf4Error(f"Expected a 2-D matrix, got {array.ndim} dimension(s)")
        if array.shape[1] < 1:
            raise Gf4Error("A GF(4) matrix needs at least one column")
        array.flags.writeable = False
        self._array = array

    @classmethod
    def from_digits(cls, rows: Sequence[Sequence[int]]) -> Gf4Matrix:
        """Build a matrix from rows of digits 0, 1, 2 (ω), 3 (ϖ).

        Raises:
            Gf4Error: On ragged rows or digits outside 0..3.
        """
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise Gf4Error(f"Ragged rows: widths {sorted(widths)}")
        return cls(np.array(rows, dtype=np.int64).reshape(len(rows), -1) if rows else np.zeros((0, 0)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf4Matrix:
        return cls(GF4.Zeros((rows, cols)))

    @classmethod
    def identity(cls, size: int) -> Gf4Matrix:
        return cls(GF4.Identity(size))

    @classmethod
    def random(cls, rows: int, cols: int, *, seed: int | np.random.Generator | None = None) -> Gf4Matrix:
        """Uniformly random matrix (used by the property tests)."""
        return cls(GF4.Random((rows, cols), seed=seed))

    # -- shape and access -------------------------------------------------

    @property
    def rows(self) -> int:
        return self._array.shape[0]

    @property
    def cols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def array(self) -> galois.FieldArray:
        """Read-only field array view."""
        return self._array

    @property
    def entries(self) -> tuple[Gf4Element, ...]:
        """Row-major sequence of elements."""
        return tuple(Gf4Element(int(v)) for v in self.to_numpy().ravel())

    def __getitem__(self, index: tuple[int, int]) -> Gf4Element:
        return Gf4Element(int(self._array[index]))

    def to_numpy(self) -> npt.NDArray[np.uint8]:
        """Plain ``uint8`` copy of the digits."""
        return self._array.view(np.ndarray).astype(np.uint8)

    def to_digits(self) -> list[list[int]]:
        return self.to_numpy().tolist()

    def is_zero(self) -> bool:
        return not np.any(self._array)

    # -- algebra -----------------------------------------------------------

    def __matmul__(self, other: Gf4Matrix) -> Gf4Matrix:
        if self.cols != other.rows:
            raise Gf4Error(f"Shape mismatch: {self.shape} @ {other.shape}")
        if other.cols < 1:
            raise Gf4Error("Product would have no columns")
        if self.rows == 0 or self.cols == 0:
            return Gf4Matrix.zeros(self.rows, other.cols)
        return Gf4Matrix(self._array @ other._array)

    def scale(self, scalar: int | Gf4Element) -> Gf4Matrix:
        return Gf4Matrix(self._array * GF4(int(_element(scalar))))

    def conj(self) -> Gf4Matrix:
        """Entrywise Frobenius conjugation."""
        return Gf4Matrix(self._array**2)

    def transpose(self) -> Gf4Matrix:
        """Plain transpose; a 0-row matrix has no transpose with columns."""
        if self.rows == 0:
            raise Gf4Error("Cannot transpose a matrix with no rows")
        return Gf4Matrix(self._array.T)

    def conj_transpose(self) -> Gf4Matrix:
        """Conjugate transpose ``M†``: entry (i, j) is ``conj(M[j, i])``."""
        return self.conj().transpose()

    def hstack(self, other: Gf4Matrix) -> Gf4Matrix:
        if self.rows != other.rows:
            raise Gf4Error(f"Row mismatch: {self.rows} vs {other.rows}")
        return Gf4Matrix(np.hstack([self._array, other._array]))

    def vstack(self, other: Gf4Matrix) -> Gf4Matrix:
        if self.cols != other.cols:
            raise Gf4Error(f"Column mismatch: {self.cols} vs {other.cols}")
        return Gf4Matrix(np.vstack([self._array, other._array]))

    def select_columns(self, columns: Iterable[int]) -> Gf4Matrix:
        """Keep the given 0-based columns in the given order."""
        return Gf4Matrix(self._array[:, list(columns)])

    def select_rows(self, rows: Iterable[int]) -> Gf4Matrix:
        """Keep the given 0-based rows in the given order."""
        return Gf4Matrix(self._array[list(rows), :])

    # -- elimination -------------------------------------------------------

    @functools.cached_property
    def _echelon(self) -> RowEchelon:
        if self.rows == 0:
            return RowEchelon(self, 0, [])
        reduced = self._array.copy().row_reduce()
        pivots = [int(np.argmax(row != 0)) for row in reduced if np.any(row)]
        logger.debug(f"rref {self.shape}: rank {len(pivots)}")
        return RowEchelon(Gf4Matrix(reduced), len(pivots), [p + 1 for p in pivots])

    def rref(self) -> RowEchelon:
        """Reduced row-echelon form, rank and 1-based pivot columns.

        Every pivot is scaled to 1 and cleared above and below; zero rows sink to
        the bottom. The form is unique, so equal row spaces give equal results.
        """
        return self._echelon

    @property
    def rank(self) -> int:
        return self._echelon.rank

    def null_space(self) -> Gf4Matrix:
        """Basis of the right kernel: rows ``b`` with ``M @ b^T = 0`` (plain transpose).

        Returns a ``(cols - rank) x cols`` matrix in reduced form (identity on the
        free columns), or a 0-row matrix when the columns are independent.
        """
        if self.rows == 0:
            return Gf4Matrix.identity(self.cols)
        reduced, rank, pivots = self._echelon
        pivot_cols = [p - 1 for p in pivots]
        pivot_set = set(pivot_cols)
        free_cols = [c for c in range(self.cols) if c not in pivot_set]
        basis = GF4.Zeros((len(free_cols), self.cols))
        rows = reduced.array
        for i, free in enumerate(free_cols):
            basis[i, free] = 1
            for r, pivot in enumerate(pivot_cols):
                # char 2: -R[r, free] == R[r, free]
                basis[i, pivot] = rows[r, free]
        return Gf4Matrix(basis)

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Gf4Matrix)
            and self.shape == other.shape
            and np.array_equal(self._array, other._array)
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.to_numpy().tobytes()))

    def __repr__(self) -> str:
        return f"Gf4Matrix({self.rows}x{self.cols})"

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.to_digits())
