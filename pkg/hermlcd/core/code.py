"""Linear codes over GF(4): construction, Hermitian duality and the transformations
used to derive new codes from published ones.

Coordinates are 1-based at every public boundary (they are quoted that way in the
construction recipes) and converted to 0-based column indices internally.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from hermlcd.config import get_settings
from hermlcd.core.gf4 import GF4, Gf4Element, Gf4Matrix

logger = logging.getLogger(__name__)

# The two-row generator printed for the [5,2,4] simplex code.
SIMPLEX_SEED = ((0, 1, 1, 1, 1), (1, 0, 1, Gf4Element.OMEGA, Gf4Element.OMEGABAR))


class CodeError(ValueError):
    """Raised for invalid code constructions or transformations."""


@dataclass(frozen=True)
class CoordSet:
    """Sorted, duplicate-free set of 1-based coordinates."""

    indices: tuple[int, ...] = ()

    def __init__(self, indices: Iterable[int] = ()):
        values = [int(i) for i in indices]
        if len(set(values)) != len(values):
            raise CodeError(f"Duplicate coordinates in {values}")
        if any(i < 1 for i in values):
            raise CodeError(f"Coordinates are 1-based; got {values}")
        object.__setattr__(self, "indices", tuple(sorted(values)))

    @classmethod
    def parse(cls, text: str) -> CoordSet:
        """Parse ``"1,3,6"`` (whitespace tolerated, empty string = empty set)."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        try:
            return cls(int(p) for p in parts)
        except ValueError as exc:
            if isinstance(exc, CodeError):
                raise
            raise CodeError(f"Malformed coordinate list: {text!r}") from exc

    def validate(self, n: int) -> None:
        """Check every index lies in ``[1, n]``."""
        bad = [i for i in self.indices if i > n]
        if bad:
            raise CodeError(f"Coordinates {bad} out of range for length {n}")

    def zero_based(self) -> list[int]:
        return [i - 1 for i in self.indices]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.indices) + "}"


@dataclass(frozen=True, eq=False)
class LinearCode:
    """An [n, k] code held by its canonical generator (reduced row-echelon form).

    Two codes with the same row space have identical stored generators, so code
    equality is matrix equality.
    """

    gen: Gf4Matrix
    label: str | None = field(default=None, compare=False)

    @classmethod
    def from_generator(cls, matrix: Gf4Matrix, label: str | None = None) -> LinearCode:
        """Build the code spanned by the rows of ``matrix``; dependent rows are dropped.

        Raises:
            CodeError: If the matrix has no nonzero row.
        """
        reduced, rank, _ = matrix.rref()
        if rank == 0:
            raise CodeError("The zero matrix does not generate a code")
        return cls(reduced.select_rows(range(rank)), label)

    @classmethod
    def full_space(cls, n: int, label: str | None = None) -> LinearCode:
        return cls(Gf4Matrix.identity(n), label)

    @property
    def n(self) -> int:
        return self.gen.cols

    @property
    def k(self) -> int:
        return self.gen.rows

    def relabel(self, label: str | None) -> LinearCode:
        return LinearCode(self.gen, label)

    def contains(self, word: Sequence[int]) -> bool:
        """Whether ``word`` (digits) lies in the code."""
        candidate = Gf4Matrix.from_digits([list(word)])
        if candidate.cols != self.n:
            raise CodeError(f"Word length {candidate.cols} != code length {self.n}")
        return self.gen.vstack(candidate).rank == self.k

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearCode) and self.gen == other.gen

    def __hash__(self) -> int:
        return hash(self.gen)

    def __str__(self) -> str:
        name = f"{self.label} " if self.label else ""
        return f"{name}[{self.n},{self.k}]"

    # -- duality -------------------------------------------------------------

    def hermitian_dual(self) -> LinearCode:
        """The [n, n-k] code orthogonal to C under ``(u, v) = sum u_i conj(v_i)``.

        Computed as the plain null space of the conjugated generator, so that
        ``G @ H† = 0``.

        Raises:
            CodeError: If k = n (the dual is the zero code).
        """
        if self.k == self.n:
            raise CodeError(f"The Hermitian dual of the full space [{self.n},{self.n}] is the zero code")
        return LinearCode.from_generator(self.gen.conj().null_space())

    def euclidean_dual(self) -> LinearCode:
        """The dual under the plain (non-conjugated) inner product.

        Raises:
            CodeError: If k = n.
        """
        if self.k == self.n:
            raise CodeError(f"The Euclidean dual of the full space [{self.n},{self.n}] is the zero code")
        return LinearCode.from_generator(self.gen.null_space())

    @functools.cached_property
    def gram_rank(self) -> int:
        """``rank(G G†)``; independent of the generator chosen for C."""
        return (self.gen @ self.gen.conj_transpose()).rank

    def is_lcd(self) -> bool:
        """C meets its Hermitian dual trivially, i.e. ``rank(G G†) = k``."""
        return self.gram_rank == self.k

    def is_self_orthogonal(self) -> bool:
        """C is contained in its Hermitian dual, i.e. ``G G† = 0``."""
        return self.gram_rank == 0

    def hull_dimension(self) -> int:
        """``dim(C ∩ C^⊥h)`` by direct intersection: ``k + (n-k) - rank[G; H]``."""
        if self.k == self.n:
            return 0
        dual = self.hermitian_dual()
        return self.k + dual.k - self.gen.vstack(dual.gen).rank

    # -- transformations -------------------------------------------------------

    def puncture(self, coords: CoordSet) -> LinearCode:
        """Delete the coordinates in ``coords`` from every codeword.

        The dimension may drop when a nonzero codeword is supported inside
        ``coords``; the returned code reports its true k.

        Raises:
            CodeError: For out-of-range coordinates, all coordinates, or a zero result.
        """
        coords.validate(self.n)
        if len(coords) >= self.n:
            raise CodeError(f"Cannot puncture all {self.n} coordinates")
        if not len(coords):
            return self
        removed = set(coords.zero_based())
        keep = [c for c in range(self.n) if c not in removed]
        punctured = self.gen.select_columns(keep)
        if punctured.is_zero():
            raise CodeError(f"Puncturing {coords} leaves only the zero word")
        result = LinearCode.from_generator(punctured)
        if result.k < self.k:
            logger.info(f"Puncturing {self} on {coords} dropped the dimension to {result.k}")
        return result

    def shorten(self, coords: CoordSet) -> LinearCode:
        """Keep the codewords vanishing on ``coords`` and delete those coordinates.

        Uses ``shorten(C, S) = dual(puncture(dual(C), S))`` with the Euclidean dual;
        shortening only looks at supports, so the inner product does not matter.

        Raises:
            CodeError: For out-of-range coordinates or a zero-dimensional result.
        """
        coords.validate(self.n)
        if len(coords) >= self.n:
            raise CodeError(f"Cannot shorten all {self.n} coordinates")
        if not len(coords):
            return self
        removed = set(coords.zero_based())
        keep = [c for c in range(self.n) if c not in removed]
        if self.k == self.n:
            return LinearCode.full_space(len(keep))
        checks = self.gen.null_space().select_columns(keep)
        if checks.is_zero():
            return LinearCode.full_space(len(keep))
        words = checks.null_space()
        if words.rows == 0:
            raise CodeError(f"Shortening {self} on {coords} leaves only the zero word")
        return LinearCode.from_generator(words)

    def extend_parity(self) -> LinearCode:
        """Append one coordinate so every generator row sums (plainly) to zero."""
        parity = GF4(np.add.reduce(self.gen.array, axis=1).reshape(-1, 1))
        return LinearCode.from_generator(self.gen.hstack(Gf4Matrix(parity)))

    def row_subcode(self, rows: Iterable[int]) -> LinearCode:
        """Code generated by the selected 1-based rows of the canonical generator.

        Raises:
            CodeError: For an empty or out-of-range selection.
        """
        selected = sorted(set(int(r) for r in rows))
        if not selected:
            raise CodeError("row_subcode needs at least one row")
        if selected[0] < 1 or selected[-1] > self.k:
            raise CodeError(f"Rows {selected} out of range for dimension {self.k}")
        return LinearCode.from_generator(self.gen.select_rows(r - 1 for r in selected))

    def hyperplane_subcode(self, normal: Sequence[int]) -> LinearCode:
        """Subcode ``{m G : sum_i m_i f_i = 0}`` of the messages annihilated by ``f = normal``.

        Messages are taken against the canonical generator, so ``normal = e_i``
        gives the same code as dropping row i.

        Raises:
            CodeError: For k = 1, a zero functional, or one of the wrong length.
        """
        if self.k < 2:
            raise CodeError(f"{self} has no nonzero hyperplane subcode")
        digits = [int(v) for v in normal]
        if len(digits) != self.k or any(v not in (0, 1, 2, 3) for v in digits):
            raise CodeError(f"Functional {digits} is not a GF(4) vector of length {self.k}")
        if not any(digits):
            raise CodeError("The zero functional does not define a hyperplane")
        kernel = Gf4Matrix.from_digits([digits]).null_space()
        return LinearCode.from_generator(kernel @ self.gen)

    def permute_and_conjugate(self, perm: Sequence[int], frobenius: bool = False) -> LinearCode:
        """Apply a coordinate permutation and optionally entrywise conjugation.

        Args:
            perm: 1-based permutation; new coordinate ``j`` takes old coordinate ``perm[j]``.
            frobenius: Conjugate every entry (swap ω and ϖ).

        Raises:
            CodeError: If ``perm`` is not a permutation of ``1..n``.
        """
        if sorted(perm) != list(range(1, self.n + 1)):
            raise CodeError(f"Not a permutation of 1..{self.n}: {list(perm)}")
        matrix = self.gen.select_columns(p - 1 for p in perm)
        if frobenius:
            matrix = matrix.conj()
        return LinearCode.from_generator(matrix)


def identity_augment(block: Gf4Matrix, label: str | None = None) -> LinearCode:
    """The [k+m, k] code generated by ``[I_k | A]`` for a k x m block ``A``."""
    return LinearCode.from_generator(Gf4Matrix.identity(block.rows).hstack(block), label)


def simplex_matrix(k: int) -> Gf4Matrix:
    """``S_k`` by the block recursion seeded with the printed ``S_2``.

    ``S_k = [S_{k-1}, 0, S_{k-1}, S_{k-1}, S_{k-1}]`` over
    ``[0, 1, 1, ω·1, ϖ·1]``.
    """
    if k < 2:
        raise CodeError(f"Simplex construction starts at k = 2, got {k}")
    matrix = Gf4Matrix.from_digits(SIMPLEX_SEED)
    for _ in range(k - 2):
        width = matrix.cols
        upper = np.hstack([matrix.array, GF4.Zeros((matrix.rows, 1)), matrix.array, matrix.array, matrix.array])
        lower = np.concatenate(
            [
                np.zeros(width, dtype=np.int64),
                [1],
                np.full(width, Gf4Element.ONE),
                np.full(width, Gf4Element.OMEGA),
                np.full(width, Gf4Element.OMEGABAR),
            ]
        )
        matrix = Gf4Matrix(np.vstack([upper, GF4(lower.reshape(1, -1))]))
    return matrix


def simplex(k: int, max_length: int | None = None) -> LinearCode:
    """The [(4^k - 1)/3, k, 4^(k-1)] simplex code.

    Raises:
        CodeError: If k < 2 or the length exceeds the configured limit.
    """
    limit = max_length if max_length is not None else get_settings().max_simplex_length
    length = (4**k - 1) // 3
    if k < 2:
        raise CodeError(f"Simplex construction starts at k = 2, got {k}")
    if length > limit:
        raise CodeError(f"simplex({k}) has length {length}, over the limit {limit}")
    return LinearCode.from_generator(simplex_matrix(k), label=f"simplex({k})")
