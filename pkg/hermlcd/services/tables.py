"""Plain-text renderings of the claimed-code grids and the LCD bounds table."""

import logging
from collections import defaultdict

from hermlcd.api.schemas import BoundsTable, ClaimedCell, VerificationReport

logger = logging.getLogger(__name__)

REPRODUCED = "+"
CLAIMED_ONLY = "?"
DISCREPANCY = "!"

LEGEND = f"{REPRODUCED} reproduced   {CLAIMED_ONLY} claimed only   {DISCREPANCY} discrepancy   * improved bound"

# The bounds grid is split into two halves of twelve dimensions each.
BOUNDS_SPLIT = 12


def best_lcd_distances(report: VerificationReport) -> dict[tuple[int, int], list[int | None]]:
    """Computed distances of the resolved LCD codes, grouped by their true (n, k)."""
    cells: dict[tuple[int, int], list[int | None]] = defaultdict(list)
    for record in report.records:
        if record.computed is not None and record.computed.lcd:
            cells[(record.computed.n, record.computed.k)].append(record.computed.d)
    return cells


def claim_status(claimed: int, distances: list[int | None]) -> str:
    """Marker for a claimed LCD distance given the distances computed at that cell."""
    known = [d for d in distances if d is not None]
    if not known:
        return CLAIMED_ONLY
    return REPRODUCED if max(known) >= claimed else DISCREPANCY


def _grid(title: str, cells: dict[tuple[int, int], str], ks: list[int] | None = None) -> str:
    if not cells:
        return f"{title}\n  (no entries)"
    ns = sorted({n for n, _ in cells})
    ks = ks if ks is not None else sorted({k for _, k in cells})
    width = max(4, *(len(text) for text in cells.values())) + 1
    lines = [title, "n\\k".rjust(4) + "".join(str(k).rjust(width) for k in ks)]
    for n in ns:
        lines.append(str(n).rjust(4) + "".join(cells.get((n, k), "").rjust(width) for k in ks))
    return "\n".join(lines)


def render_claims(name: str, title: str, claims: list[ClaimedCell], report: VerificationReport) -> str:
    """One claimed grid with every cell annotated."""
    computed = best_lcd_distances(report)
    cells = {
        (c.n, c.k): f"{c.d}{claim_status(c.d, computed.get((c.n, c.k), []))}"
        for c in claims
        if c.table == name
    }
    return _grid(title, cells)


def render_bounds(bounds: BoundsTable, report: VerificationReport) -> str:
    """The LCD bounds table; reached cells are marked, bold cells never reached are claimed only."""
    computed = best_lcd_distances(report)
    cells: dict[tuple[int, int], str] = {}
    for entry in bounds.entries:
        if entry.lcd_lower is None:
            continue
        value = str(entry.lcd_lower)
        if entry.lcd_upper is not None and entry.lcd_upper != entry.lcd_lower:
            value += f"-{entry.lcd_upper}"
        if entry.bold:
            value += "*"
        known = [d for d in computed.get((entry.n, entry.k), []) if d is not None]
        if known and entry.lcd_upper is not None and max(known) > entry.lcd_upper:
            value += DISCREPANCY
        elif known and max(known) >= entry.lcd_lower:
            value += REPRODUCED
        elif entry.bold:
            value += CLAIMED_ONLY
        cells[(entry.n, entry.k)] = value
    low = {key: text for key, text in cells.items() if key[1] <= BOUNDS_SPLIT}
    high = {key: text for key, text in cells.items() if key[1] > BOUNDS_SPLIT}
    parts = [_grid(f"LCD bounds d_l(n,k), k <= {BOUNDS_SPLIT}", low, list(range(1, BOUNDS_SPLIT + 1)))]
    if high:
        parts.append(_grid(f"LCD bounds d_l(n,k), k > {BOUNDS_SPLIT}", high))
    return "\n\n".join(parts)


def render_tables(report: VerificationReport, claims: list[ClaimedCell], bounds: BoundsTable) -> str:
    """All three grids followed by the legend."""
    logger.debug(f"Rendering tables from {len(report.records)} record(s)")
    sections = [
        render_claims("table1", "Optimal LCD codes, 21 <= n <= 25, 13 <= k <= 19", claims, report),
        render_claims("table2", "Optimal LCD codes, 21 <= n <= 25, 8 <= k <= 15", claims, report),
        render_bounds(bounds, report),
        LEGEND,
    ]
    return "\n\n".join(sections)
