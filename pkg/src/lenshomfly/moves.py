"""Grid moves: commutations, skein crossings, resolutions and (de)stabilizations.

Two adjacent columns form an annulus cut into ``p*n`` segments (one per row per
wrap). A column pair is indexed by its left column ``j``; the pair ``(n-1, 0)``
crosses the vertical seam and is handled by the same formulas.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

from .diagram import Cell, DiagramError, GridDiagram, _translate_cell, translate

__all__ = [
    "CellNotInPair",
    "CommuteClass",
    "IllegalExchange",
    "InternalInvariantViolation",
    "Marking",
    "MoveError",
    "MoveRecord",
    "NotDestabilizable",
    "Sign",
    "SkeinCrossing",
    "STABILIZATION_VARIANTS",
    "classify_column_commutation",
    "classify_row_commutation",
    "column_position",
    "commute_columns",
    "commute_rows",
    "crossing_at",
    "crossing_change",
    "destabilize",
    "find_skein_crossings",
    "resolve",
    "segment_index",
    "stabilization_triple",
    "stabilize",
]


class MoveError(DiagramError):
    invariant = "move"


class IllegalExchange(MoveError):
    invariant = "IllegalExchange"


class CellNotInPair(MoveError):
    invariant = "CellNotInPair"


class NotDestabilizable(MoveError):
    invariant = "NotDestabilizable"


class InternalInvariantViolation(RuntimeError):
    """A broken internal guarantee (a convention bug, never a user input error)."""


class CommuteClass(enum.Enum):
    NON_INTERLEAVING = "NonInterleaving"
    INTERLEAVING = "Interleaving"
    ILLEGAL = "Illegal"


class Sign(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"

    @property
    def opposite(self) -> "Sign":
        return Sign.NEGATIVE if self is Sign.POSITIVE else Sign.POSITIVE


class Marking(NamedTuple):
    kind: str  # "O" or "X"
    cell: Cell


@dataclass(frozen=True)
class SkeinCrossing:
    left_column: int
    sign: Sign
    segments: tuple[int, int, int, int]  # (o_left, x_left, o_right, x_right)


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    params: dict = field(default_factory=dict)
    classification: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "params": self.params}
        if self.classification is not None:
            out["classification"] = self.classification
        return out


def _between(a: int, x: int, b: int, size: int) -> bool:
    """True when ``x`` lies in the ascending cyclic open interval ``(a, b)``."""
    return 0 < (x - a) % size < (b - a) % size


def _separates(a: int, b: int, c: int, d: int, size: int) -> bool:
    if len({a, b, c, d}) < 4:
        return False
    return _between(a, c, b, size) != _between(a, d, b, size)


# Segment geometry ------------------------------------------------------------


def column_position(d: GridDiagram, strip: int, row: int, base_strip: int) -> int:
    """Position of a cell in the column annulus whose wrap-0 strip is ``base_strip``.

    Walking upward adds one per row; crossing the top edge moves to the next wrap.
    """
    if d.p == 1:
        return row
    offset = (base_strip - strip) % d.width
    if offset % d.n:
        raise CellNotInPair(f"strip {strip} is not in the column of strip {base_strip}")
    wrap = (d.q_inverse * (offset // d.n)) % d.p
    return wrap * d.n + row


def segment_index(d: GridDiagram, cell: Cell, left_column: int) -> int:
    n = d.n
    if n < 2:
        raise CellNotInPair("a grid number 1 diagram has no column pairs")
    cell = Cell(*cell)
    j = left_column % n
    col = cell.strip % n
    if col == j:
        strip = cell.strip
    elif col == (j + 1) % n:
        strip = (cell.strip - 1) % d.width
    else:
        raise CellNotInPair(f"cell {tuple(cell)} is not in columns {j}, {(j + 1) % n}")
    return column_position(d, strip, cell.row, j)


def _pair_segments(d: GridDiagram, j: int) -> tuple[int, int, int, int]:
    right = (j + 1) % d.n
    return (
        segment_index(d, d.o_in_column(j), j),
        segment_index(d, d.x_in_column(j), j),
        segment_index(d, d.o_in_column(right), j),
        segment_index(d, d.x_in_column(right), j),
    )


def _classify(first: Sequence[int], second: Sequence[int], size: int) -> CommuteClass:
    if set(first) & set(second):
        return CommuteClass.ILLEGAL
    a, b = first
    c, e = second
    if a != b and c != e and _separates(a, b, c, e, size):
        return CommuteClass.INTERLEAVING
    return CommuteClass.NON_INTERLEAVING


def classify_column_commutation(d: GridDiagram, j: int) -> CommuteClass:
    if d.n < 2:
        return CommuteClass.ILLEGAL
    ol, xl, o_r, xr = _pair_segments(d, j % d.n)
    return _classify((ol, xl), (o_r, xr), d.width)


def _row_segment(d: GridDiagram, cell: Cell, lower_row: int) -> int:
    if cell.row == lower_row:
        return cell.strip
    if lower_row == d.n - 1:
        return (cell.strip + d.q * d.n) % d.width
    return cell.strip


def classify_row_commutation(d: GridDiagram, r: int) -> CommuteClass:
    """Classify exchanging rows ``r`` and ``r+1`` (``r = n-1`` pairs with row 0)."""
    if d.n < 2:
        return CommuteClass.ILLEGAL
    r %= d.n
    upper = (r + 1) % d.n
    first = [_row_segment(d, c, r) for c in (d.o_in_row(r), d.x_in_row(r))]
    second = [_row_segment(d, c, r) for c in (d.o_in_row(upper), d.x_in_row(upper))]
    return _classify(first, second, d.width)


# Raw move maps (index preserving) -------------------------------------------


def _column_shift(d: GridDiagram, j: int):
    n, w = d.n, d.width
    right = (j + 1) % n

    def move(cell: Cell) -> Cell:
        col = cell.strip % n
        if col == j:
            return Cell((cell.strip + 1) % w, cell.row)
        if col == right:
            return Cell((cell.strip - 1) % w, cell.row)
        return cell

    return move


def _row_shift(d: GridDiagram, r: int):
    n, w, shear = d.n, d.width, d.q * d.n
    upper = (r + 1) % n

    def move(cell: Cell) -> Cell:
        if cell.row == r:
            if r == n - 1:
                return Cell((cell.strip - shear) % w, 0)
            return Cell(cell.strip, r + 1)
        if cell.row == upper:
            if r == n - 1:
                return Cell((cell.strip + shear) % w, n - 1)
            return Cell(cell.strip, r)
        return cell

    return move


def _rebuild(d: GridDiagram, move) -> GridDiagram:
    return GridDiagram(d.p, d.q, d.n, [move(c) for c in d.o_marks], [move(c) for c in d.x_marks])


def commute_columns(d: GridDiagram, j: int) -> GridDiagram:
    j %= d.n
    cls = classify_column_commutation(d, j)
    if cls is CommuteClass.ILLEGAL:
        raise IllegalExchange(f"columns {j} and {(j + 1) % d.n} share an annulus segment")
    return _rebuild(d, _column_shift(d, j))


def commute_rows(d: GridDiagram, r: int) -> GridDiagram:
    r %= d.n
    cls = classify_row_commutation(d, r)
    if cls is CommuteClass.ILLEGAL:
        raise IllegalExchange(f"rows {r} and {(r + 1) % d.n} share an annulus segment")
    return _rebuild(d, _row_shift(d, r))


# Skein crossings --------------------------------------------------------------


def crossing_at(d: GridDiagram, j: int) -> SkeinCrossing | None:
    """The skein crossing at interface ``j`` or ``None`` when not interleaving."""
    if d.n < 2 or classify_column_commutation(d, j) is not CommuteClass.INTERLEAVING:
        return None
    segs = _pair_segments(d, j % d.n)
    ol, xl, o_r, _ = segs
    sign = Sign.POSITIVE if _between(ol, o_r, xl, d.width) else Sign.NEGATIVE
    return SkeinCrossing(j % d.n, sign, segs)


def find_skein_crossings(d: GridDiagram) -> list[SkeinCrossing]:
    if d.n < 2:
        return []
    interfaces = range(d.n) if d.n > 2 else range(2)
    found = [crossing_at(d, j) for j in interfaces]
    return [c for c in found if c is not None]


def crossing_change(d: GridDiagram, crossing: SkeinCrossing) -> GridDiagram:
    return commute_columns(d, crossing.left_column)


def resolve(d: GridDiagram, crossing: SkeinCrossing) -> GridDiagram:
    """Resolve a skein crossing: the two O (positive) or X (negative) markings trade columns.

    Each traded marking keeps its annulus segment, so it moves one strip across
    the interface while its row is unchanged.
    """
    j = crossing.left_column
    if crossing_at(d, j) is None:
        raise IllegalExchange(f"no skein crossing at columns {j}, {(j + 1) % d.n}")
    shift = _column_shift(d, j)
    if crossing.sign is Sign.POSITIVE:
        return GridDiagram(d.p, d.q, d.n, [shift(c) for c in d.o_marks], d.x_marks)
    return GridDiagram(d.p, d.q, d.n, d.o_marks, [shift(c) for c in d.x_marks])


# Stabilization ---------------------------------------------------------------

STABILIZATION_VARIANTS = tuple(f"{k}:{c}" for k in "XO" for c in ("NW", "NE", "SW", "SE"))

_CORNERS = {"SW": (0, 0), "SE": (1, 0), "NW": (0, 1), "NE": (1, 1)}


def _parse_variant(variant: str) -> tuple[str, str]:
    text = variant.upper().replace("_", ":")
    if text not in STABILIZATION_VARIANTS:
        raise ValueError(f"unknown stabilization variant {variant!r}; expected one of {STABILIZATION_VARIANTS}")
    kind, corner = text.split(":")
    return kind, corner


def _as_marking(d: GridDiagram, marking) -> Marking:
    kind, cell = marking
    kind = str(kind).upper()
    cell = Cell(*cell)
    marks = d.o_marks if kind == "O" else d.x_marks
    if kind not in ("O", "X") or cell not in marks:
        raise ValueError(f"{kind} marking at {tuple(cell)} is not in the diagram")
    return Marking(kind, cell)


def stabilize(d: GridDiagram, marking, variant: str) -> GridDiagram:
    """Replace ``marking`` by a 2x2 L-pattern; the variant's corner stays empty."""
    kind, corner = _parse_variant(variant)
    m = _as_marking(d, marking)
    if m.kind != kind:
        raise ValueError(f"variant {variant} needs an {kind} marking, got {m.kind}")
    n, new_n = d.n, d.n + 1
    k, r = m.cell.strip % n, m.cell.row
    left = (m.cell.strip // n) * new_n + k
    empty_dx, empty_dy = _CORNERS[corner]

    def reindex(cell: Cell, side: int = 0, level: int = 0) -> Cell:
        col, block = cell.strip % n, cell.strip // n
        strip = block * new_n + col + (1 if col > k else side if col == k else 0)
        row = cell.row + (1 if cell.row > r else level if cell.row == r else 0)
        return Cell(strip, row)

    own = [Cell(left + dx, r + dy) for (dx, dy) in _CORNERS.values() if (dx, dy) != (empty_dx, empty_dy)
           and (dx, dy) != (1 - empty_dx, 1 - empty_dy)]
    other = Cell(left + 1 - empty_dx, r + 1 - empty_dy)

    same = d.o_marks if kind == "O" else d.x_marks
    opposite = d.x_marks if kind == "O" else d.o_marks
    new_same = [reindex(c) for c in same if c != m.cell] + own
    new_opposite = [reindex(c, side=empty_dx, level=empty_dy) for c in opposite] + [other]
    if kind == "O":
        return GridDiagram(d.p, d.q, new_n, new_same, new_opposite)
    return GridDiagram(d.p, d.q, new_n, new_opposite, new_same)


def stabilization_triple(d: GridDiagram, marking, variant: str) -> list[Marking]:
    """The triple of ``stabilize(d, marking, variant)`` whose destabilization undoes it."""
    kind, corner = _parse_variant(variant)
    m = _as_marking(d, marking)
    n = d.n
    left = (m.cell.strip // n) * (n + 1) + m.cell.strip % n
    r = m.cell.row
    ex, ey = _CORNERS[corner]
    other_kind = "X" if kind == "O" else "O"
    return [
        Marking(kind, Cell(left + 1 - ex, r + ey)),
        Marking(other_kind, Cell(left + 1 - ex, r + 1 - ey)),
        Marking(kind, Cell(left + ex, r + 1 - ey)),
    ]


def _above(d: GridDiagram, cell: Cell) -> Cell:
    return _translate_cell(d, cell, 0, 1)


def _destabilize_interior(d: GridDiagram, col_nb: Marking, corner: Marking, row_nb: Marking) -> GridDiagram:
    n = d.n
    k, r = corner.cell.strip % n, corner.cell.row
    merged = Cell(row_nb.cell.strip, col_nb.cell.row)
    new_n = n - 1

    def reindex(cell: Cell) -> Cell:
        col, block = cell.strip % n, cell.strip // n
        return Cell(block * new_n + col - (1 if col > k else 0), cell.row - (1 if cell.row > r else 0))

    removed = {(col_nb.kind, col_nb.cell), (corner.kind, corner.cell), (row_nb.kind, row_nb.cell)}
    o_marks = [reindex(c) for c in d.o_marks if ("O", c) not in removed]
    x_marks = [reindex(c) for c in d.x_marks if ("X", c) not in removed]
    (o_marks if col_nb.kind == "O" else x_marks).append(reindex(merged))
    return GridDiagram(d.p, d.q, new_n, o_marks, x_marks)


def destabilize(d: GridDiagram, triple) -> GridDiagram:
    """Inverse of a stabilization at the corner marking of ``triple``.

    The middle marking is the corner; one of the outer markings must sit directly
    above or below it and the other directly beside it in its row.
    """
    try:
        a, b, c = (_as_marking(d, m) for m in triple)
    except ValueError as exc:
        raise NotDestabilizable(str(exc)) from exc
    if d.n < 2:
        raise NotDestabilizable("grid number 1 diagrams cannot be destabilized")
    if not (a.kind == c.kind != b.kind):
        raise NotDestabilizable("the outer markings must share a type different from the middle one")

    def vertical(m: Marking) -> int:
        if m.cell.strip % d.n != b.cell.strip % d.n:
            return 0
        if _above(d, b.cell) == m.cell:
            return 1
        if _above(d, m.cell) == b.cell:
            return -1
        return 0

    def horizontal(m: Marking) -> int:
        if m.cell.row != b.cell.row:
            return 0
        if (b.cell.strip + 1) % d.width == m.cell.strip:
            return 1
        if (m.cell.strip + 1) % d.width == b.cell.strip:
            return -1
        return 0

    if vertical(a) and horizontal(c):
        col_nb, row_nb = a, c
    elif vertical(c) and horizontal(a):
        col_nb, row_nb = c, a
    else:
        raise NotDestabilizable("markings do not form an adjacent corner pattern")

    up = vertical(col_nb)
    crosses_top = (up == 1 and b.cell.row == d.n - 1) or (up == -1 and b.cell.row == 0)
    if not crosses_top:
        return _destabilize_interior(d, col_nb, b, row_nb)
    # move the block off the top edge, destabilize, then move back
    shift = -1 if up == 1 else 1
    moved = translate(d, 0, shift)

    def mv(m: Marking) -> Marking:
        return Marking(m.kind, _translate_cell(d, m.cell, 0, shift))

    result = _destabilize_interior(moved, mv(col_nb), mv(b), mv(row_nb))
    return translate(result, 0, -shift)
