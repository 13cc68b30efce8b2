"""Corpus service - bundled matrices, recipes, bounds and the verification harness."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import ValidationError

from hermlcd.api.schemas import (
    BoundsEntry,
    BoundsTable,
    ClaimedCell,
    ComputedDetails,
    Delta,
    Expected,
    Recipe,
    VerificationRecord,
    VerificationReport,
    WeightEnumerator,
    parse_polynomial,
)
from hermlcd.core.code import CodeError, CoordSet, LinearCode, identity_augment, simplex
from hermlcd.core.gf4 import Gf4Matrix
from hermlcd.core.qmat import QmatDocument, QmatFormatError, read_qmat
from hermlcd.services.weights import BoundsError, EnumerationLimitError, WeightEngine, classify_optimality, eaqecc_params

logger = logging.getLogger(__name__)

RECIPE_KEYS = {
    "id",
    "op",
    "parent",
    "matrix",
    "coords",
    "rows",
    "simplex_k",
    "expected_n",
    "expected_k",
    "expected_d",
    "expected_lcd",
    "expected_enum",
    "expected_enum_partial",
    "provenance",
    "ledger",
}


class RecipeError(ValueError):
    """Raised for malformed recipes, unknown ids, cycles and missing matrix files."""


@dataclass(frozen=True)
class Unavailable:
    """Marker for a recipe whose ancestry includes a matrix that was never published."""

    reason: str


@dataclass(frozen=True)
class LedgerItem:
    """One known discrepancy between printed claims and computed truth."""

    item: str
    recipe_id: str | None
    description: str


# -- file loading -------------------------------------------------------------


def _data_lines(path: Path) -> list[tuple[int, str]]:
    return [
        (number, line.rstrip("\n"))
        for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]


def _comment_lines(path: Path) -> list[str]:
    return [
        line.lstrip()[1:].strip()
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.lstrip().startswith("#")
    ]


def _tsv_rows(path: Path, columns: list[str]) -> list[dict[str, str]]:
    """Rows of a tab-separated file whose first data line is the given header."""
    lines = _data_lines(path)
    if not lines:
        return []
    header = lines[0][1].split("\t")
    if header != columns:
        raise RecipeError(f"{path}: expected columns {columns}, found {header}")
    rows = []
    for number, line in lines[1:]:
        values = line.split("\t")
        if len(values) != len(columns):
            raise RecipeError(f"{path}:{number}: expected {len(columns)} fields, found {len(values)}")
        rows.append(dict(zip(columns, values)))
    return rows


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered not in ("true", "false"):
        raise ValueError(f"Expected true/false, got {text!r}")
    return lowered == "true"


def _recipe_from_block(block: dict[str, str], source: str) -> Recipe:
    unknown = set(block) - RECIPE_KEYS
    if unknown:
        raise RecipeError(f"{source}: unknown key(s) {sorted(unknown)}")
    try:
        expected_n = int(block["expected_n"]) if "expected_n" in block else None
        enumerator = parse_polynomial(block["expected_enum"], expected_n) if "expected_enum" in block else None
        expected = Expected(
            n=expected_n,
            k=int(block["expected_k"]) if "expected_k" in block else None,
            d=int(block["expected_d"]) if "expected_d" in block else None,
            lcd=_parse_bool(block["expected_lcd"]) if "expected_lcd" in block else None,
            enumerator=enumerator,
            enumerator_partial=_parse_bool(block.get("expected_enum_partial", "false")),
        )
        return Recipe(
            id=block.get("id", ""),
            op=block.get("op", ""),
            parent=block.get("parent"),
            matrix_ref=block.get("matrix"),
            coords=_int_list(block["coords"]) if "coords" in block else None,
            rows=_int_list(block["rows"]) if "rows" in block else None,
            simplex_k=int(block["simplex_k"]) if "simplex_k" in block else None,
            expected=expected,
            provenance=block.get("provenance", ""),
            ledger=block.get("ledger"),
        )
    except (ValueError, ValidationError) as exc:
        raise RecipeError(f"{source}: {exc}") from exc


def parse_recipes(text: str, source: str = "<text>") -> list[Recipe]:
    """Parse blank-line separated ``key=value`` blocks.

    Raises:
        RecipeError: On malformed lines, unknown keys or invalid recipes.
    """
    recipes: list[Recipe] = []
    block: dict[str, str] = {}
    start = 0
    for number, raw in enumerate(text.splitlines() + [""], start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if block:
                recipes.append(_recipe_from_block(block, f"{source}:{start}"))
                block = {}
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise RecipeError(f"{source}:{number}: expected key=value, got {line!r}")
        key = key.strip()
        if key in block:
            raise RecipeError(f"{source}:{number}: duplicate key {key!r}")
        if not block:
            start = number
        block[key] = value.strip()
    return recipes


def load_registry(recipes_dir: Path) -> dict[str, Recipe]:
    """Load every ``*.rcp`` file under ``recipes_dir``.

    Raises:
        RecipeError: On malformed files or duplicate ids.
    """
    registry: dict[str, Recipe] = {}
    for path in sorted(Path(recipes_dir).glob("*.rcp")):
        for recipe in parse_recipes(path.read_text(encoding="utf-8"), source=str(path)):
            if recipe.id in registry:
                raise RecipeError(f"{path}: duplicate recipe id {recipe.id!r}")
            registry[recipe.id] = recipe
    logger.info(f"Loaded {len(registry)} recipe(s) from {recipes_dir}")
    return registry


def load_matrices(matrices_dir: Path) -> dict[str, QmatDocument]:
    """Load every ``*.qmat`` file, keyed by the id in its header."""
    documents: dict[str, QmatDocument] = {}
    for path in sorted(Path(matrices_dir).glob("*.qmat")):
        try:
            document = read_qmat(path)
        except QmatFormatError as exc:
            raise RecipeError(str(exc)) from exc
        if document.matrix_id in documents:
            raise RecipeError(f"{path}: duplicate matrix id {document.matrix_id!r}")
        documents[document.matrix_id] = document
    logger.info(f"Loaded {len(documents)} matrix file(s) from {matrices_dir}")
    return documents


def load_bounds(bounds_dir: Path) -> BoundsTable:
    """Merge ``table3.tsv`` (LCD bounds) with ``grassl_snapshot.tsv`` (best-known linear d)."""
    bounds_dir = Path(bounds_dir)
    cells: dict[tuple[int, int], dict] = {}
    table3 = bounds_dir / "table3.tsv"
    if table3.exists():
        for row in _tsv_rows(table3, ["n", "k", "lower", "upper", "bold"]):
            key = (int(row["n"]), int(row["k"]))
            cells.setdefault(key, {"n": key[0], "k": key[1]}).update(
                lcd_lower=int(row["lower"]), lcd_upper=int(row["upper"]), bold=row["bold"] == "1"
            )
    snapshot = bounds_dir / "grassl_snapshot.tsv"
    provenance = ""
    if snapshot.exists():
        provenance = " ".join(_comment_lines(snapshot))
        for row in _tsv_rows(snapshot, ["n", "k", "d"]):
            key = (int(row["n"]), int(row["k"]))
            cells.setdefault(key, {"n": key[0], "k": key[1]})["linear_best"] = int(row["d"])
    entries = [BoundsEntry(**cells[key]) for key in sorted(cells)]
    logger.info(f"Loaded {len(entries)} bounds cell(s) from {bounds_dir}")
    return BoundsTable(entries=entries, snapshot_provenance=provenance)


def load_claims(claims_dir: Path) -> list[ClaimedCell]:
    """Claimed distances from ``table*.tsv`` grids; the table name is the file stem."""
    claims = []
    for path in sorted(Path(claims_dir).glob("table*.tsv")):
        for row in _tsv_rows(path, ["n", "k", "d"]):
            claims.append(ClaimedCell(table=path.stem, n=int(row["n"]), k=int(row["k"]), d=int(row["d"])))
    return claims


def load_ledger(path: Path) -> dict[str, LedgerItem]:
    """Known-discrepancy ledger keyed by item tag; recipe id ``-`` means no recipe."""
    if not Path(path).exists():
        return {}
    ledger = {}
    for row in _tsv_rows(Path(path), ["item", "recipe", "description"]):
        recipe_id = None if row["recipe"] == "-" else row["recipe"]
        ledger[row["item"]] = LedgerItem(row["item"], recipe_id, row["description"])
    return ledger


@dataclass
class Corpus:
    """Everything under the data directory."""

    recipes: dict[str, Recipe] = field(default_factory=dict)
    matrices: dict[str, QmatDocument] = field(default_factory=dict)
    bounds: BoundsTable = field(default_factory=BoundsTable)
    claims: list[ClaimedCell] = field(default_factory=list)
    ledger: dict[str, LedgerItem] = field(default_factory=dict)

    @classmethod
    def load(cls, data_dir: Path) -> "Corpus":
        """Load the corpus rooted at ``data_dir``.

        Raises:
            RecipeError: On malformed files or a recipe naming an unknown ledger item.
        """
        data_dir = Path(data_dir)
        if not data_dir.is_dir():
            raise RecipeError(f"Corpus directory not found: {data_dir}")
        corpus = cls(
            recipes=load_registry(data_dir / "recipes"),
            matrices=load_matrices(data_dir / "matrices"),
            bounds=load_bounds(data_dir / "bounds"),
            claims=load_claims(data_dir / "claims"),
            ledger=load_ledger(data_dir / "ledger.tsv"),
        )
        for recipe in corpus.recipes.values():
            if recipe.ledger is not None and recipe.ledger not in corpus.ledger:
                raise RecipeError(f"{recipe.id}: unknown ledger item {recipe.ledger!r}")
        return corpus

    def audit(self) -> list[str]:
        """Bounds-row flags plus ledger rows pointing at missing recipes."""
        flags = self.bounds.audit()
        for item in self.ledger.values():
            if item.recipe_id is not None and item.recipe_id not in self.recipes:
                flags.append(f"ledger ({item.item}): unknown recipe {item.recipe_id}")
        return flags


# -- resolution ---------------------------------------------------------------


class RecipeResolver:
    """Builds codes from recipes, memoising every step."""

    def __init__(self, corpus: Corpus, engine: WeightEngine):
        self.corpus = corpus
        self.engine = engine
        self.notes: dict[str, list[str]] = {}
        self._memo: dict[str, LinearCode | Unavailable] = {}
        self._active: set[str] = set()

    def resolve(self, recipe_id: str) -> LinearCode | Unavailable:
        """Resolve a recipe to a code or to the unavailable marker.

        Raises:
            RecipeError: On an unknown id, a cycle or a missing matrix file.
            CodeError: If a transformation is invalid for the parent code.
        """
        if recipe_id in self._memo:
            return self._memo[recipe_id]
        recipe = self.corpus.recipes.get(recipe_id)
        if recipe is None:
            raise RecipeError(f"Unknown recipe id {recipe_id!r}")
        if recipe_id in self._active:
            raise RecipeError(f"Recipe cycle through {recipe_id!r}")
        self._active.add(recipe_id)
        try:
            result = self._build(recipe)
        finally:
            self._active.discard(recipe_id)
        if isinstance(result, LinearCode):
            result = result.relabel(recipe_id)
        self._memo[recipe_id] = result
        return result

    def _matrix(self, recipe: Recipe) -> Gf4Matrix:
        document = self.corpus.matrices.get(recipe.matrix_ref or "")
        if document is None:
            raise RecipeError(f"{recipe.id}: matrix file {recipe.matrix_ref!r} not found")
        return document.matrix

    def _build(self, recipe: Recipe) -> LinearCode | Unavailable:
        if recipe.op == "matrix":
            if recipe.matrix_ref is None:
                return Unavailable(f"{recipe.id}: generator matrix never published")
            return LinearCode.from_generator(self._matrix(recipe))
        if recipe.op == "identity_augment":
            return identity_augment(self._matrix(recipe))
        if recipe.op == "simplex":
            return simplex(recipe.simplex_k, max_length=self.engine.settings.max_simplex_length)

        parent = self.resolve(recipe.parent)
        if isinstance(parent, Unavailable):
            return parent
        if recipe.op == "puncture":
            return parent.puncture(CoordSet(recipe.coords))
        if recipe.op == "shorten":
            return parent.shorten(CoordSet(recipe.coords))
        if recipe.op == "extend":
            return parent.extend_parity()
        if recipe.op == "dual":
            return parent.hermitian_dual()
        if recipe.rows is not None:
            return parent.row_subcode(recipe.rows)
        return self._search_row_subcode(recipe, parent)

    def _printed_rows(self, parent_id: str) -> Gf4Matrix | None:
        parent = self.corpus.recipes[parent_id]
        if parent.op == "matrix" and parent.matrix_ref in self.corpus.matrices:
            return self.corpus.matrices[parent.matrix_ref].matrix
        return None

    def _search_row_subcode(self, recipe: Recipe, parent: LinearCode) -> LinearCode:
        """Try every single-row removal; the printed rows first, then the canonical ones."""
        bases = []
        printed = self._printed_rows(recipe.parent)
        if printed is not None:
            bases.append(("printed", printed))
        bases.append(("canonical", parent.gen))

        expected = recipe.expected
        matches: list[tuple[str, int, LinearCode]] = []
        fallback: tuple[tuple, str, int, LinearCode] = ((False, -1), "canonical", 0, parent)
        for basis_name, basis in bases:
            for removed in range(1, basis.rows + 1):
                rows = [r for r in range(basis.rows) if r != removed - 1]
                candidate = LinearCode.from_generator(basis.select_rows(rows))
                d = self.engine.min_distance(candidate) if self.engine.can_enumerate(candidate) else None
                lcd = candidate.is_lcd()
                fits = (
                    (expected.n is None or candidate.n == expected.n)
                    and (expected.k is None or candidate.k == expected.k)
                    and (expected.d is None or d == expected.d)
                    and (expected.lcd is None or lcd == expected.lcd)
                )
                if fits:
                    matches.append((basis_name, removed, candidate))
                score = (expected.lcd is None or lcd == expected.lcd, d or 0)
                if score > fallback[0]:
                    fallback = (score, basis_name, removed, candidate)
            if matches:
                break

        notes = self.notes.setdefault(recipe.id, [])
        if matches:
            basis_name, removed, chosen = matches[0]
            found = ",".join(str(r) for b, r, _ in matches if b == basis_name)
            notes.append(f"row_subcode search: removing {basis_name} row(s) {{{found}}} fits; selected row {removed}")
            return chosen
        notes.append("row_subcode search: no single-row removal fits")
        logger.warning(f"{recipe.id}: no single-row removal of {recipe.parent} fits the expected parameters")
        if (
            expected.d is not None
            and (expected.k is None or expected.k == parent.k - 1)
            and 2 <= parent.k <= self.engine.inner_rows
        ):
            found = self._search_hyperplanes(recipe, parent, notes)
            if found is not None:
                return found
        _, basis_name, removed, chosen = fallback
        notes.append(f"keeping the closest single-row removal: {basis_name} row {removed}")
        return chosen

    def _search_hyperplanes(self, recipe: Recipe, parent: LinearCode, notes: list[str]) -> LinearCode | None:
        """Exhaustive search over every (k - 1)-dimensional subcode of the parent."""
        expected = recipe.expected
        total = (4**parent.k - 1) // 3
        normals = self.engine.hyperplane_subcodes(parent, expected.d)
        summary = f"exhaustive search: {len(normals)} of {total} hyperplane subcodes reach d >= {expected.d}"
        for normal in normals:
            candidate = parent.hyperplane_subcode(normal)
            if expected.lcd is not None and candidate.is_lcd() != expected.lcd:
                continue
            if self.engine.min_distance(candidate) != expected.d:
                continue
            functional = " ".join(str(v) for v in normal)
            notes.append(f"{summary}; selected the kernel of ({functional})")
            return candidate
        notes.append(f"{summary}; none fits")
        logger.warning(f"{recipe.id}: {summary}; none fits")
        return None


# -- verification -------------------------------------------------------------


def _compare_enumerator(expected: Expected, computed: WeightEnumerator, notes: list[str]) -> Delta | None:
    printed = expected.enumerator
    if printed is None:
        return None
    if expected.enumerator_partial:
        top = max(i for i, a in enumerate(printed) if a)
        if computed.coeffs[: top + 1] != printed[: top + 1]:
            return Delta(field="enumerator_prefix", expected=printed[: top + 1], computed=computed.coeffs[: top + 1])
        return None
    total = sum(printed)
    if total != 4**computed.k:
        notes.append(f"printed enumerator sums to {total}, not 4^{computed.k} = {4**computed.k}")
    if printed != computed.coeffs:
        return Delta(field="enumerator", expected=printed, computed=computed.coeffs)
    return None


def verify_recipe(
    recipe: Recipe, resolver: RecipeResolver, engine: WeightEngine, bounds: BoundsTable
) -> tuple[VerificationRecord, list[str]]:
    """Resolve one recipe and compare it with its claims.

    Returns:
        The record and any bounds-row flags it raised.
    """
    notes: list[str] = []
    flags: list[str] = []
    base = dict(id=recipe.id, expected=recipe.expected, ledger=recipe.ledger, provenance=recipe.provenance)
    try:
        code = resolver.resolve(recipe.id)
    except (RecipeError, CodeError) as exc:
        logger.warning(f"{recipe.id}: resolution failed: {exc}")
        return VerificationRecord(status="discrepancy", notes=[f"resolution failed: {exc}"], **base), flags
    notes.extend(resolver.notes.get(recipe.id, []))
    if isinstance(code, Unavailable):
        logger.warning(f"{recipe.id}: unverifiable ({code.reason})")
        return VerificationRecord(status="unverifiable-parent", notes=notes + [code.reason], **base), flags

    lcd = code.is_lcd()
    hull = code.hull_dimension()
    enumerator = None
    d = None
    try:
        enumerator = engine.weight_enumerator(code)
        d = enumerator.min_distance()
    except EnumerationLimitError:
        notes.append(
            f"distance not computed: min(k, n-k) = {min(code.k, code.n - code.k)} "
            f"exceeds the exhaustive limit {engine.exhaustive_limit}"
        )
    eaqecc = eaqecc_params(code, d)

    deltas: list[Delta] = []
    expected = recipe.expected
    for name, value in (("n", code.n), ("k", code.k), ("lcd", lcd)):
        claim = getattr(expected, name)
        if claim is not None and claim != value:
            deltas.append(Delta(field=name, expected=claim, computed=value))
    if expected.d is not None and d is not None and expected.d != d:
        deltas.append(Delta(field="d", expected=expected.d, computed=d))
    if enumerator is not None:
        delta = _compare_enumerator(expected, enumerator, notes)
        if delta is not None:
            deltas.append(delta)

    if hull != code.k - code.gram_rank:
        deltas.append(Delta(field="hull_dimension", expected=code.k - code.gram_rank, computed=hull))
    if lcd and eaqecc.c != code.n - code.k:
        deltas.append(Delta(field="eaqecc_c", expected=code.n - code.k, computed=eaqecc.c))

    optimality = None
    entry = bounds.get(code.n, code.k)
    if d is not None and entry is not None:
        if lcd and entry.lcd_lower is not None and d < entry.lcd_lower:
            flags.append(f"{recipe.id}: LCD d = {d} below lower bound {entry.lcd_lower} at ({code.n},{code.k})")
        if lcd and entry.lcd_upper is not None and d > entry.lcd_upper:
            flags.append(f"{recipe.id}: LCD d = {d} above upper bound {entry.lcd_upper} at ({code.n},{code.k})")
        if entry.linear_best is not None and d > entry.linear_best:
            flags.append(f"{recipe.id}: d = {d} above best-known linear {entry.linear_best} at ({code.n},{code.k})")
    if d is not None and lcd:
        try:
            optimality = classify_optimality(code.n, code.k, d, bounds)
        except BoundsError:
            pass
    notes.extend(flags)

    computed = ComputedDetails(
        n=code.n,
        k=code.k,
        d=d,
        lcd=lcd,
        gram_rank=code.gram_rank,
        hull_dimension=hull,
        self_orthogonal=code.is_self_orthogonal(),
        enumerator=enumerator.coeffs if enumerator is not None and expected.enumerator is not None else None,
        digest=enumerator.digest() if enumerator is not None else None,
        eaqecc=str(eaqecc),
        optimality=optimality,
    )
    status = "discrepancy" if deltas else "match"
    if deltas:
        logger.warning(f"{recipe.id}: discrepancy in {', '.join(delta.field for delta in deltas)}")
    else:
        logger.info(f"{recipe.id}: match [{code.n},{code.k},{d}] lcd={lcd}")
    record = VerificationRecord(
        status=status,
        n=code.n,
        k=code.k,
        d=d,
        lcd=lcd,
        computed=computed,
        deltas=deltas,
        notes=notes,
        **base,
    )
    return record, flags


def verify_all(corpus: Corpus, engine: WeightEngine) -> VerificationReport:
    """Verify every recipe; records come out sorted by id."""
    resolver = RecipeResolver(corpus, engine)
    records = []
    flags = corpus.audit()
    for recipe_id in sorted(corpus.recipes):
        record, record_flags = verify_recipe(corpus.recipes[recipe_id], resolver, engine, corpus.bounds)
        records.append(record)
        flags.extend(record_flags)
    report = VerificationReport.build(records, flags)
    logger.info(f"Verification finished: {report.summary.line()}")
    return report
