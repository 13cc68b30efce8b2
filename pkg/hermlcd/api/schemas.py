"""Pydantic schemas for enumerators, verdicts, recipes, bounds and reports."""

import hashlib
import re
from typing import Literal

from pydantic import BaseModel, Field, PrivateAttr, model_validator

RecipeOp = Literal["matrix", "identity_augment", "simplex", "puncture", "shorten", "extend", "row_subcode", "dual"]
BASE_OPS: frozenset[str] = frozenset({"matrix", "identity_augment", "simplex"})

RecordStatus = Literal["match", "discrepancy", "unverifiable-parent"]
OptimalityStatus = Literal["optimal-LCD", "nearly-optimal-LCD", "below-bounds", "above-table"]

_TERM = re.compile(r"^(?P<coeff>\d+)?\*?(?:(?P<var>[A-Za-z])(?:\^\{?(?P<power>\d+)\}?)?)?$")


def parse_polynomial(text: str, n: int | None = None) -> list[int]:
    """Parse a printed weight polynomial such as ``1+207z^{14}+378z^15``.

    Accepts any single letter as the variable (one letter throughout), optional
    braces around exponents and arbitrary whitespace. The coefficients are
    returned as printed, without any normalisation check.

    Args:
        text: Polynomial text.
        n: Pad the coefficient list to length ``n + 1``.

    Raises:
        ValueError: On an unparsable term, mixed variables, a repeated power or a
            power above ``n``.
    """
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ValueError("Empty polynomial")
    terms: dict[int, int] = {}
    variables: set[str] = set()
    for term in compact.split("+"):
        match = _TERM.match(term)
        if not term or match is None or (match["coeff"] is None and match["var"] is None):
            raise ValueError(f"Cannot parse term {term!r} in {text!r}")
        if match["var"] is not None:
            variables.add(match["var"])
            if len(variables) > 1:
                raise ValueError(f"Mixed variables {sorted(variables)} in {text!r}")
        coeff = int(match["coeff"]) if match["coeff"] is not None else 1
        power = 0 if match["var"] is None else int(match["power"] or 1)
        if power in terms:
            raise ValueError(f"Power {power} repeated in {text!r}")
        terms[power] = coeff
    top = max(terms)
    length = top if n is None else n
    if top > length:
        raise ValueError(f"Power {top} exceeds length {length} in {text!r}")
    return [terms.get(i, 0) for i in range(length + 1)]


def format_polynomial(coeffs: list[int]) -> str:
    """Render ``[1, 0, 3]`` as ``1 + 3 z^2`` (zero terms omitted)."""
    terms = []
    for power, coeff in enumerate(coeffs):
        if coeff == 0:
            continue
        if power == 0:
            terms.append(str(coeff))
        elif power == 1:
            terms.append(f"{coeff} z")
        else:
            terms.append(f"{coeff} z^{power}")
    return " + ".join(terms) if terms else "0"


class WeightEnumerator(BaseModel):
    """Exact weight distribution ``A_0 .. A_n`` of an [n, k] code."""

    n: int = Field(..., description="Code length", ge=1)
    k: int = Field(..., description="Code dimension (0 for the zero code)", ge=0)
    coeffs: list[int] = Field(..., description="A_i = number of codewords of weight i")

    @model_validator(mode="after")
    def check_normalisation(self) -> "WeightEnumerator":
        if self.k > self.n:
            raise ValueError(f"k = {self.k} exceeds n = {self.n}")
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"Expected {self.n + 1} coefficients, got {len(self.coeffs)}")
        if self.coeffs[0] != 1:
            raise ValueError(f"A_0 must be 1, got {self.coeffs[0]}")
        if any(a < 0 for a in self.coeffs):
            raise ValueError("Negative coefficient")
        if sum(self.coeffs) != 4**self.k:
            raise ValueError(f"Coefficients sum to {sum(self.coeffs)}, expected 4^{self.k} = {4**self.k}")
        bad = [i for i, a in enumerate(self.coeffs) if i >= 1 and a % 3]
        if bad:
            raise ValueError(f"A_i not divisible by 3 at weights {bad}")
        return self

    @classmethod
    def from_polynomial(cls, text: str, n: int, k: int) -> "WeightEnumerator":
        """Parse and validate a printed polynomial."""
        return cls(n=n, k=k, coeffs=parse_polynomial(text, n))

    def min_distance(self) -> int | None:
        """Smallest nonzero weight, or None for the zero code."""
        return next((i for i, a in enumerate(self.coeffs) if i >= 1 and a > 0), None)

    def polynomial(self) -> str:
        return format_polynomial(self.coeffs)

    def digest(self) -> str:
        """Short sha256 fingerprint of ``n``, ``k`` and the coefficients."""
        payload = f"{self.n};{self.k};" + ",".join(str(a) for a in self.coeffs)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


class CodeParams(BaseModel):
    """``[n, k, d]``."""

    n: int
    k: int
    d: int | None = None

    def __str__(self) -> str:
        return f"[{self.n},{self.k}]" if self.d is None else f"[{self.n},{self.k},{self.d}]"


class CodeInfo(BaseModel):
    """Duality summary of a code."""

    label: str | None = None
    n: int
    k: int
    gram_rank: int = Field(..., description="rank(G G†)")
    hull_dimension: int
    lcd: bool
    self_orthogonal: bool

    @classmethod
    def of(cls, code) -> "CodeInfo":
        return cls(
            label=code.label,
            n=code.n,
            k=code.k,
            gram_rank=code.gram_rank,
            hull_dimension=code.hull_dimension(),
            lcd=code.is_lcd(),
            self_orthogonal=code.is_self_orthogonal(),
        )


class EaqeccParams(BaseModel):
    """Entanglement-assisted quantum code parameters ``[[n, 2k - n + c, d; c]]``."""

    n: int
    dim: int
    d: int | None
    c: int = Field(..., description="Entangled pairs: rank(H H†) of the parity-check matrix")

    def __str__(self) -> str:
        d = "?" if self.d is None else str(self.d)
        return f"[[{self.n},{self.dim},{d};{self.c}]]"


class OptimalityVerdict(BaseModel):
    """Computed distance against the best-known linear distance for (n, k)."""

    status: OptimalityStatus
    d_computed: int
    d_reference: int


class Expected(BaseModel):
    """Values a construction step claims for its result."""

    n: int | None = None
    k: int | None = None
    d: int | None = None
    lcd: bool | None = None
    enumerator: list[int] | None = Field(default=None, description="Printed coefficients, as printed")
    enumerator_partial: bool = Field(default=False, description="Only a prefix of the enumerator is printed")


class Recipe(BaseModel):
    """One declarative construction step."""

    id: str = Field(..., min_length=1)
    op: RecipeOp
    parent: str | None = None
    matrix_ref: str | None = None
    coords: list[int] | None = Field(default=None, description="1-based coordinates for puncture/shorten")
    rows: list[int] | None = Field(default=None, description="1-based rows for row_subcode (None = search)")
    simplex_k: int | None = None
    expected: Expected = Field(default_factory=Expected)
    provenance: str = ""
    ledger: str | None = Field(default=None, description="Known-discrepancy ledger item, if any")

    @model_validator(mode="after")
    def check_shape(self) -> "Recipe":
        if (self.op in BASE_OPS) == (self.parent is not None):
            raise ValueError(f"{self.id}: op {self.op!r} {'forbids' if self.op in BASE_OPS else 'requires'} a parent")
        if self.op == "identity_augment" and not self.matrix_ref:
            raise ValueError(f"{self.id}: identity_augment needs matrix=")
        if self.op == "simplex" and self.simplex_k is None:
            raise ValueError(f"{self.id}: simplex needs simplex_k=")
        if self.op in ("puncture", "shorten") and self.coords is None:
            raise ValueError(f"{self.id}: {self.op} needs coords=")
        return self


class BoundsEntry(BaseModel):
    """Bounds for one (n, k) cell."""

    n: int
    k: int
    lcd_lower: int | None = None
    lcd_upper: int | None = None
    bold: bool = False
    linear_best: int | None = Field(default=None, description="Best-known linear distance d_o(n, k)")


class BoundsTable(BaseModel):
    """LCD bounds merged with the best-known linear distances, keyed by (n, k)."""

    entries: list[BoundsEntry] = Field(default_factory=list)
    snapshot_provenance: str = ""

    _index: dict[tuple[int, int], BoundsEntry] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._index = {(e.n, e.k): e for e in self.entries}

    def get(self, n: int, k: int) -> BoundsEntry | None:
        return self._index.get((n, k))

    def audit(self) -> list[str]:
        """Flag rows breaking ``lcd_lower <= lcd_upper <= linear_best`` or the k = 1 LCD value.

        A one-dimensional code spanned by a full-weight vector is LCD exactly when
        that vector is not self-orthogonal, i.e. when n is odd; for even n the best
        LCD line drops one coordinate.
        """
        flags = []
        for e in sorted(self.entries, key=lambda e: (e.n, e.k)):
            cell = f"({e.n},{e.k})"
            if e.lcd_lower is not None and e.lcd_upper is not None and e.lcd_lower > e.lcd_upper:
                flags.append(f"{cell}: lcd lower {e.lcd_lower} > upper {e.lcd_upper}")
            top = e.lcd_upper if e.lcd_upper is not None else e.lcd_lower
            if top is not None and e.linear_best is not None and top > e.linear_best:
                flags.append(f"{cell}: lcd bound {top} > best-known linear {e.linear_best}")
            if e.k == 1 and e.lcd_lower is not None:
                exact = e.n if e.n % 2 else e.n - 1
                if e.lcd_lower != exact or (e.lcd_upper is not None and e.lcd_upper != exact):
                    flags.append(f"{cell}: one-dimensional LCD distance is {exact}, table gives {e.lcd_lower}")
        return flags


class ClaimedCell(BaseModel):
    """A distance printed in one of the claimed-code grids."""

    table: str
    n: int
    k: int
    d: int


class Delta(BaseModel):
    """A field where the computed value differs from the claim."""

    field: str
    expected: int | bool | list[int] | None
    computed: int | bool | list[int] | None


class ComputedDetails(BaseModel):
    """Everything computed for a resolved recipe."""

    n: int
    k: int
    d: int | None
    lcd: bool
    gram_rank: int
    hull_dimension: int
    self_orthogonal: bool
    enumerator: list[int] | None = None
    digest: str | None = None
    eaqecc: str | None = None
    optimality: OptimalityVerdict | None = None


class VerificationRecord(BaseModel):
    """Outcome of one recipe; field order is part of the JSON contract."""

    id: str
    status: RecordStatus
    n: int | None = None
    k: int | None = None
    d: int | None = None
    lcd: bool | None = None
    expected: Expected
    computed: ComputedDetails | None = None
    deltas: list[Delta] = Field(default_factory=list)
    ledger: str | None = None
    notes: list[str] = Field(default_factory=list)
    provenance: str = ""


class ReportSummary(BaseModel):
    match: int = 0
    discrepancy: int = 0
    unverifiable: int = 0
    unledgered_discrepancies: list[str] = Field(default_factory=list)

    def line(self) -> str:
        return f"match={self.match} discrepancy={self.discrepancy} unverifiable={self.unverifiable}"


class VerificationReport(BaseModel):
    """Per-recipe records sorted by id, a summary and bounds-row flags."""

    records: list[VerificationRecord] = Field(default_factory=list)
    summary: ReportSummary = Field(default_factory=ReportSummary)
    bounds_flags: list[str] = Field(default_factory=list)

    @classmethod
    def build(cls, records: list[VerificationRecord], bounds_flags: list[str] | None = None) -> "VerificationReport":
        ordered = sorted(records, key=lambda r: r.id)
        summary = ReportSummary(
            match=sum(r.status == "match" for r in ordered),
            discrepancy=sum(r.status == "discrepancy" for r in ordered),
            unverifiable=sum(r.status == "unverifiable-parent" for r in ordered),
            unledgered_discrepancies=[r.id for r in ordered if r.status == "discrepancy" and r.ledger is None],
        )
        return cls(records=ordered, summary=summary, bounds_flags=list(bounds_flags or []))
