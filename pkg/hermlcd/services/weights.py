"""Weight analysis service - exact weight enumerators, minimum distance and derived parameters.

Codewords are held as two bit planes (the ``1`` and ``ω`` coordinates of every
entry, packed into ``uint64`` words), so adding codewords is XOR and the Hamming
weight is ``popcount(lo | hi)``. Multiplying by ``ω`` maps the planes
``(lo, hi) -> (hi, lo ^ hi)``.

One representative per 1-dimensional subspace is enumerated: the leading
nonzero coefficient is fixed to 1, and each count is multiplied by 3.
"""

import functools
import logging
import math
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt
from pydantic import ValidationError

from hermlcd.api.schemas import BoundsTable, EaqeccParams, OptimalityVerdict, WeightEnumerator
from hermlcd.config import Settings, get_settings
from hermlcd.core.code import CodeError, LinearCode
from hermlcd.core.gf4 import GF4

logger = logging.getLogger(__name__)

# Outer representatives combined with the inner table per numpy call.
_BATCH = 16

# Hyperplane normals tested against the low-weight messages per matmul.
_NORMAL_BATCH = 256


class EnumerationLimitError(RuntimeError):
    """Raised when no side of a code is small enough to enumerate."""


class MacWilliamsError(ValueError):
    """Raised when a transform yields a non-integral or negative coefficient."""


class BoundsError(KeyError):
    """Raised when the bounds table has no usable entry for (n, k)."""


@functools.lru_cache(maxsize=None)
def krawtchouk(n: int, j: int, i: int) -> int:
    """Quaternary Krawtchouk value ``K_j(i) = sum_s (-1)^s 3^(j-s) C(i,s) C(n-i,j-s)``."""
    return sum((-1) ** s * 3 ** (j - s) * math.comb(i, s) * math.comb(n - i, j - s) for s in range(j + 1))


def macwilliams_transform(enumerator: WeightEnumerator) -> WeightEnumerator:
    """Weight enumerator of the dual of a code with the given enumerator.

    Valid for the Hermitian dual as well as the Euclidean one, since the two are
    conjugates of each other and conjugation keeps weights.

    Raises:
        MacWilliamsError: If any output coefficient is fractional or negative.
    """
    n, k = enumerator.n, enumerator.k
    scale = 4**k
    coeffs = []
    for j in range(n + 1):
        total = sum(a * krawtchouk(n, j, i) for i, a in enumerate(enumerator.coeffs) if a)
        quotient, remainder = divmod(total, scale)
        if remainder or quotient < 0:
            raise MacWilliamsError(f"A'_{j} = {total}/4^{k} is not a nonnegative integer")
        coeffs.append(quotient)
    try:
        return WeightEnumerator(n=n, k=n - k, coeffs=coeffs)
    except ValidationError as exc:
        raise MacWilliamsError(f"Transformed enumerator is not normalised: {exc}") from exc


def full_space_enumerator(n: int) -> WeightEnumerator:
    """``(1 + 3z)^n`` expanded: the enumerator of GF(4)^n."""
    return WeightEnumerator(n=n, k=n, coeffs=[math.comb(n, i) * 3**i for i in range(n + 1)])


def eaqecc_params(code: LinearCode, d: int | None) -> EaqeccParams:
    """``[[n, 2k - n + c, d; c]]`` with ``c = rank(H H†)`` for H generating the Hermitian dual."""
    c = 0 if code.k == code.n else code.hermitian_dual().gram_rank
    return EaqeccParams(n=code.n, dim=2 * code.k - code.n + c, d=d, c=c)


def classify_optimality(n: int, k: int, d: int, bounds: BoundsTable) -> OptimalityVerdict:
    """Compare d with the best-known linear distance d_o(n, k).

    Raises:
        BoundsError: If the table has no best-known distance for (n, k).
    """
    entry = bounds.get(n, k)
    if entry is None or entry.linear_best is None:
        raise BoundsError(f"No best-known linear distance for ({n},{k})")
    reference = entry.linear_best
    if d == reference:
        status = "optimal-LCD"
    elif d == reference - 1:
        status = "nearly-optimal-LCD"
    elif d > reference:
        status = "above-table"
    else:
        status = "below-bounds"
    return OptimalityVerdict(status=status, d_computed=d, d_reference=reference)


def _bit_planes(code: LinearCode) -> tuple[npt.NDArray[np.uint64], npt.NDArray[np.uint64]]:
    """Pack the generator rows into ``(k, words)`` arrays of lo and hi bits."""
    digits = code.gen.to_numpy()
    words = (code.n + 63) // 64
    padded = np.zeros((code.k, words * 64), dtype=np.uint8)
    padded[:, : code.n] = digits
    lo = np.packbits(padded & 1, axis=1).view(np.uint64)
    hi = np.packbits(padded >> 1, axis=1).view(np.uint64)
    return np.ascontiguousarray(lo), np.ascontiguousarray(hi)


def _span_table(
    lo_rows: npt.NDArray[np.uint64], hi_rows: npt.NDArray[np.uint64]
) -> tuple[npt.NDArray[np.uint64], npt.NDArray[np.uint64]]:
    """All ``4^m`` combinations of m rows.

    Index ``sum_j c_j 4^j`` holds ``sum_j c_j * row_j`` with ``c_j`` the GF(4)
    element of integer value 0, 1, 2 (ω) or 3 (ϖ).
    """
    words = lo_rows.shape[1]
    table_lo = np.zeros((1, words), dtype=np.uint64)
    table_hi = np.zeros((1, words), dtype=np.uint64)
    for r_lo, r_hi in zip(lo_rows, hi_rows):
        mix = r_lo ^ r_hi
        table_lo = np.concatenate([table_lo, table_lo ^ r_lo, table_lo ^ r_hi, table_lo ^ mix])
        table_hi = np.concatenate([table_hi, table_hi ^ r_hi, table_hi ^ mix, table_hi ^ r_lo])
    return table_lo, table_hi


def _projective_indices(rows: int) -> npt.NDArray[np.int64]:
    """Table indices whose leading nonzero coefficient is 1: ``[4^j, 2*4^j)`` for each j."""
    if rows == 0:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([np.arange(4**j, 2 * 4**j, dtype=np.int64) for j in range(rows)])


def _weights(lo: npt.NDArray[np.uint64], hi: npt.NDArray[np.uint64]) -> npt.NDArray[np.int64]:
    return np.bitwise_count(lo | hi).sum(axis=-1, dtype=np.int64)


def _message_digits(indices: npt.NDArray[np.int64], rows: int) -> npt.NDArray[np.uint8]:
    """Coefficient vectors ``(c_0, ..., c_{rows-1})`` of span-table indices."""
    shifts = 2 * np.arange(rows, dtype=np.int64)
    return ((indices[:, np.newaxis] >> shifts) & 3).astype(np.uint8)


class WeightEngine:
    """Service computing exact weight enumerators.

    Exhaustive enumeration splits the generator into an inner table of
    ``inner_rows`` rows, held in memory, and outer representatives that are
    partitioned across a thread pool. Histograms are merged by summation, so the
    result does not depend on the partitioning.
    """

    def __init__(self, settings: Settings | None = None):
        """Initialize the engine.

        Args:
            settings: Engine limits and pool size (defaults to the cached settings).
        """
        self.settings = settings or get_settings()
        self.exhaustive_limit = self.settings.exhaustive_limit
        self.inner_rows = max(1, self.settings.inner_rows)
        self.workers = max(1, self.settings.workers)
        self._executor = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="wenum")
        self.cache_size = max(1, self.settings.enumerator_cache_size)
        self._cache: OrderedDict[LinearCode, WeightEnumerator] = OrderedDict()
        self._lock = threading.Lock()

    def __enter__(self) -> "WeightEngine":
        return self

    def __exit__(self, *exc_info) -> None:
        self.shutdown()

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)

    @property
    def cached_count(self) -> int:
        """Number of codes whose enumerator is memoised (at most ``cache_size``)."""
        return len(self._cache)

    def can_enumerate(self, code: LinearCode) -> bool:
        """Whether either side of the code is within the exhaustive limit."""
        return min(code.k, code.n - code.k) <= self.exhaustive_limit or code.k == code.n

    # -- engines -------------------------------------------------------------

    def enumerate_weights(self, code: LinearCode) -> WeightEnumerator:
        """Exhaustive enumeration over ``(4^k - 1) / 3`` projective representatives.

        Raises:
            EnumerationLimitError: If k exceeds the exhaustive limit.
        """
        if code.k > self.exhaustive_limit:
            raise EnumerationLimitError(f"k = {code.k} exceeds the exhaustive limit {self.exhaustive_limit} for {code}")
        with self._lock:
            cached = self._cache.get(code)
            if cached is not None:
                self._cache.move_to_end(code)
        if cached is not None:
            return cached

        lo, hi = _bit_planes(code)
        inner = min(self.inner_rows, code.k)
        outer = code.k - inner
        inner_lo, inner_hi = _span_table(lo[:inner], hi[:inner])
        histogram = np.bincount(_weights(inner_lo, inner_hi)[_projective_indices(inner)], minlength=code.n + 1)

        if outer:
            outer_lo, outer_hi = _span_table(lo[inner:], hi[inner:])
            reps = _projective_indices(outer)
            chunks = [c for c in np.array_split(reps, self.workers) if c.size]
            logger.debug(
                f"Enumerating {code}: inner {inner} rows, {reps.size} outer representatives in {len(chunks)} chunk(s)"
            )
            partials = self._executor.map(
                lambda chunk: self._outer_histogram(chunk, outer_lo, outer_hi, inner_lo, inner_hi, code.n),
                chunks,
            )
            for partial in partials:
                histogram = histogram + partial

        coeffs = [1] + [3 * int(a) for a in histogram[1:]]
        enumerator = WeightEnumerator(n=code.n, k=code.k, coeffs=coeffs)
        with self._lock:
            self._cache[code] = enumerator
            self._cache.move_to_end(code)
            while len(self._cache) > self.cache_size:
                self._cache.popitem(last=False)
        return enumerator

    @staticmethod
    def _outer_histogram(
        chunk: npt.NDArray[np.int64],
        outer_lo: npt.NDArray[np.uint64],
        outer_hi: npt.NDArray[np.uint64],
        inner_lo: npt.NDArray[np.uint64],
        inner_hi: npt.NDArray[np.uint64],
        n: int,
    ) -> npt.NDArray[np.int64]:
        histogram = np.zeros(n + 1, dtype=np.int64)
        for start in range(0, chunk.size, _BATCH):
            batch = chunk[start : start + _BATCH]
            lo = outer_lo[batch][:, np.newaxis, :] ^ inner_lo[np.newaxis, :, :]
            hi = outer_hi[batch][:, np.newaxis, :] ^ inner_hi[np.newaxis, :, :]
            histogram += np.bincount(_weights(lo, hi).ravel(), minlength=n + 1)
        return histogram

    def weight_enumerator_via_dual(self, code: LinearCode) -> WeightEnumerator:
        """Enumerate the Hermitian dual and apply the MacWilliams transform.

        Raises:
            EnumerationLimitError: If n - k exceeds the exhaustive limit.
        """
        if code.k == code.n:
            return full_space_enumerator(code.n)
        if code.n - code.k > self.exhaustive_limit:
            raise EnumerationLimitError(
                f"n - k = {code.n - code.k} exceeds the exhaustive limit {self.exhaustive_limit} for {code}"
            )
        return macwilliams_transform(self.enumerate_weights(code.hermitian_dual()))

    def weight_enumerator(self, code: LinearCode) -> WeightEnumerator:
        """Enumerator from the smaller side (primal when k <= n - k).

        Raises:
            EnumerationLimitError: If both sides exceed the exhaustive limit.
        """
        primal_first = code.k <= code.n - code.k
        if primal_first and code.k <= self.exhaustive_limit:
            return self.enumerate_weights(code)
        if code.k == code.n or code.n - code.k <= self.exhaustive_limit:
            logger.info(f"{code}: enumerating the {code.n - code.k}-dimensional dual side")
            return self.weight_enumerator_via_dual(code)
        if code.k <= self.exhaustive_limit:
            return self.enumerate_weights(code)
        raise EnumerationLimitError(
            f"min(k, n - k) = {min(code.k, code.n - code.k)} exceeds the exhaustive limit {self.exhaustive_limit}"
        )

    def min_distance(self, code: LinearCode) -> int:
        """Minimum Hamming distance.

        Raises:
            EnumerationLimitError: If both sides exceed the exhaustive limit.
        """
        return self.weight_enumerator(code).min_distance() or 0

    # -- subcode search ------------------------------------------------------

    def hyperplane_subcodes(self, code: LinearCode, min_distance: int) -> list[tuple[int, ...]]:
        """Functionals f whose hyperplane subcode has distance at least ``min_distance``.

        Every ``(k - 1)``-dimensional subcode is ``{m G : m . f = 0}`` for G the
        canonical generator and one f per projective class, so the search is
        exhaustive over ``(4^k - 1) / 3`` subcodes. A subcode qualifies when no
        message of a codeword lighter than ``min_distance`` lies in it.

        Raises:
            CodeError: If k < 2.
            EnumerationLimitError: If k exceeds ``inner_rows`` (the whole code is tabulated).
        """
        if code.k < 2:
            raise CodeError(f"{code} has no nonzero hyperplane subcode")
        if code.k > self.inner_rows:
            raise EnumerationLimitError(f"k = {code.k} exceeds the tabulated rows {self.inner_rows} for {code}")

        lo, hi = _bit_planes(code)
        table_lo, table_hi = _span_table(lo, hi)
        weights = _weights(table_lo, table_hi)
        projective = _projective_indices(code.k)
        light = projective[weights[projective] < min_distance]
        normals = _message_digits(projective, code.k)
        if light.size == 0:
            return [tuple(int(v) for v in row) for row in normals]

        messages = GF4(_message_digits(light, code.k))
        kept: list[tuple[int, ...]] = []
        for start in range(0, len(normals), _NORMAL_BATCH):
            block = normals[start : start + _NORMAL_BATCH]
            # (light, block): zero where a light message lies in the hyperplane
            inside = (messages @ GF4(block).T) == 0
            clear = ~np.any(inside.view(np.ndarray), axis=0)
            kept.extend(tuple(int(v) for v in row) for row in block[clear])
        logger.info(
            f"{code}: {len(kept)} of {len(normals)} hyperplane subcodes avoid the {light.size} words below d = {min_distance}"
        )
        return kept
