"""Trivial links: index sets, their standard diagrams, and their normalized values."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .diagram import Cell, DiagramError, GridDiagram, _translate_cell, components, translate
from .laurent import LaurentPoly, parse, unknot_factor
from .moves import (
    CommuteClass,
    InternalInvariantViolation,
    MoveRecord,
    classify_row_commutation,
    commute_columns,
    commute_rows,
)

__all__ = [
    "EmptyIndexSet",
    "IndexSet",
    "NotAllGridNumberOne",
    "NormalizationTable",
    "ProjectionStats",
    "SortPlan",
    "build_trivial_diagram",
    "index_set_of",
    "load_normalization",
    "projection_stats",
    "sigma",
    "sorted_trivial_form",
    "trivial_value",
]


class EmptyIndexSet(DiagramError):
    invariant = "EmptyIndexSet"


class NotAllGridNumberOne(DiagramError):
    invariant = "NotAllGridNumberOne"


@dataclass(frozen=True)
class IndexSet:
    """Multiplicities ``m[i]`` of grid number 1 components in homology class ``i``."""

    p: int
    q: int
    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if len(self.m) != self.p:
            raise ValueError(f"index set needs {self.p} entries, got {len(self.m)}")
        if any(x < 0 for x in self.m):
            raise ValueError("index set entries must be non-negative")

    @property
    def n(self) -> int:
        return sum(self.m)

    def without_nullhomotopic(self) -> "IndexSet":
        return IndexSet(self.p, self.q, (0,) + self.m[1:])

    def __str__(self) -> str:
        return ",".join(map(str, self.m))


def sigma(p: int, q: int, i: int) -> int:
    """The class ``k`` with ``k*q = i (mod p)``."""
    if p == 1:
        return 0
    return (i * pow(q % p, -1, p)) % p


def _class_sequence(index: IndexSet) -> list[int]:
    """Homology class of each diagonal component: block ``l`` holds class ``sigma(l)``."""
    classes = [sigma(index.p, index.q, l) for l in range(index.p)]
    return [mu for mu in classes for _ in range(index.m[mu])]


def build_trivial_diagram(index: IndexSet) -> GridDiagram:
    n = index.n
    if n < 1:
        raise EmptyIndexSet("the index set has no components")
    p, q = index.p, index.q
    o_marks, x_marks = [], []
    for i, mu in enumerate(_class_sequence(index)):
        row = n - 1 - i
        o_marks.append(Cell(i, row))
        x_marks.append(Cell((i - mu * q * n) % (p * n), row))
    return GridDiagram(p, q, n, o_marks, x_marks)


def _require_grid_number_one(d: GridDiagram):
    decomposition = components(d)
    if any(c.grid_number != 1 for c in decomposition):
        raise NotAllGridNumberOne("some component has grid number greater than 1")
    return decomposition


def index_set_of(d: GridDiagram) -> IndexSet:
    decomposition = _require_grid_number_one(d)
    counts = [0] * d.p
    for comp in decomposition:
        counts[comp.mu] += 1
    return IndexSet(d.p, d.q, tuple(counts))


# Projection statistics -------------------------------------------------------


@dataclass(frozen=True)
class ProjectionStats:
    writhe: int
    mu_total: int
    lambda_total: int
    s: Fraction


def projection_stats(index: IndexSet) -> ProjectionStats:
    """Writhe and intersection numbers of the standard projection of ``D(index)``.

    Each vertical arc runs upward from its O through ``mu`` top-edge crossings;
    each horizontal arc runs rightward from its X to its O. Every crossing has
    the horizontal strand going right and the vertical strand going up, so each
    one counts +1.
    """
    d = build_trivial_diagram(index)
    p, n, width = d.p, d.n, d.width
    vertical: list[Cell] = []
    horizontal: set[Cell] = set()
    mu_total = lambda_total = 0
    for o, x in zip(d.o_marks, d.x_marks):
        travel = (o.strip - x.strip) % width
        mu = (d.q_inverse * (travel // n)) % p if p > 1 else 0
        mu_total += mu
        lambda_total += travel // n
        cell = o
        for _ in range(mu * n - 1 if mu else 0):
            cell = _translate_cell(d, cell, 0, 1)
            vertical.append(cell)
        for step in range(1, travel):
            horizontal.add(Cell((x.strip + step) % width, x.row))
    writhe = sum(cell in horizontal for cell in vertical)
    s = writhe - Fraction(mu_total * lambda_total + mu_total - lambda_total, p)
    return ProjectionStats(writhe, mu_total, lambda_total, s)


# Normalized values ------------------------------------------------------------

NormalizationTable = Mapping[tuple[int, ...], LaurentPoly]


def load_normalization(source: str | Path | Iterable[Mapping]) -> dict[tuple[int, ...], LaurentPoly]:
    """Read override values ``[{"index": [...], "value": "..."}]`` for trivial links.

    Entries with nullhomotopic components are rejected because their values
    follow from the unknot rules.
    """
    if isinstance(source, (str, Path)):
        entries = json.loads(Path(source).read_text())
    else:
        entries = list(source)
    if not isinstance(entries, list):
        raise ValueError("normalization table must be a list of {index, value} objects")
    table: dict[tuple[int, ...], LaurentPoly] = {}
    for entry in entries:
        try:
            key = tuple(int(x) for x in entry["index"])
            value = parse(str(entry["value"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad normalization entry {entry!r}") from exc
        if not key or key[0] != 0:
            raise ValueError(f"override for {list(key)} has nullhomotopic components")
        if sum(key) == 0:
            raise EmptyIndexSet("override index set has no components")
        table[key] = value
    return table


def trivial_value(index: IndexSet, table: NormalizationTable | None = None) -> LaurentPoly:
    if index.n < 1:
        raise EmptyIndexSet("the index set has no components")
    p = index.p
    unknots = index.m[0]
    essential = index.without_nullhomotopic()
    if essential.n == 0:
        return LaurentPoly.monomial(1, 1 - p) * unknot_factor(p) ** (unknots - 1)
    if table and essential.m in table:
        base = table[essential.m]
    else:
        exponent = p * projection_stats(essential).s + 1
        base = LaurentPoly.monomial(1, int(exponent))
    return base * unknot_factor(p) ** unknots


# Sorting into the standard diagram -------------------------------------------


@dataclass(frozen=True)
class SortPlan:
    """Moves that carry a grid number 1 diagram onto ``D(index)``.

    ``order`` lists the original columns in their final left-to-right order.
    ``column_moves`` are column commutations and translations; ``row_moves``
    are row commutations, all non-interleaving.
    """

    order: tuple[int, ...]
    column_moves: tuple[MoveRecord, ...]
    row_moves: tuple[MoveRecord, ...]
    result: GridDiagram

    @property
    def transpositions(self) -> list[int]:
        return [m.params["j"] for m in self.column_moves if m.kind == "ColumnCommute"]


def _sort_key(d: GridDiagram, o: Cell, x: Cell) -> tuple[int, int]:
    travel = (o.strip - x.strip) % d.width
    return (travel // d.n, -o.row)


def sorted_trivial_form(d: GridDiagram) -> SortPlan:
    """Plan: align blocks, bubble-sort columns by class then row, sort rows, translate."""
    _require_grid_number_one(d)
    n = d.n
    cur = d
    moves: list[MoveRecord] = []
    tags = {c.strip % n: c.strip % n for c in d.o_marks}  # column -> original column

    def commute(j: int) -> None:
        nonlocal cur, tags
        right = (j + 1) % n
        tags = {**tags, j: tags[right], right: tags[j]}
        moves.append(MoveRecord("ColumnCommute", {"j": j}))
        cur = commute_columns(cur, j)

    def shift(h: int) -> None:
        nonlocal cur, tags
        tags = {(c + h) % n: t for c, t in tags.items()}
        moves.append(MoveRecord("Translate", {"h": h, "v": 0}))
        cur = translate(cur, h, 0)

    def block(col: int) -> int:
        return cur.o_in_column(col).strip // n

    # Bring every O into the block of column 0 by cycling single columns once
    # around the torus: n-1 commutations and a unit translation shift one column
    # by a whole block relative to the rest.
    if n > 1 and d.p > 1:

        def cycles(target: int, b: int) -> int:
            gap = (target - b) % d.p
            return min(gap, d.p - gap)

        blocks = [block(col) for col in range(n)]
        target = min(range(d.p), key=lambda t: (sum(cycles(t, b) for b in blocks), t))
        for col in range(n):
            gap = (target - block(col)) % d.p
            forward = gap <= d.p - gap
            for _ in range(gap if forward else d.p - gap):
                c = col
                for _ in range(n - 1):
                    if forward:
                        commute(c)
                        c = (c + 1) % n
                    else:
                        commute((c - 1) % n)
                        c = (c - 1) % n
                shift(1 if forward else -1)

    def key(col: int) -> tuple[int, int]:
        return _sort_key(cur, cur.o_in_column(col), cur.x_in_column(col))

    changed = True
    while changed:
        changed = False
        for j in range(n - 1):
            if key(j) > key(j + 1):
                commute(j)
                changed = True

    row_moves: list[MoveRecord] = []
    target = {cur.o_in_column(col).row: n - 1 - col for col in range(n)}  # current row -> target row
    rows = [None] * n
    for r, t in target.items():
        rows[r] = t
    changed = True
    while changed:
        changed = False
        for r in range(n - 1):
            # target rows should increase with the row index
            if rows[r] > rows[r + 1]:
                if classify_row_commutation(cur, r) is not CommuteClass.NON_INTERLEAVING:
                    raise InternalInvariantViolation(f"row commutation {r} in the sorting plan is not non-interleaving")
                row_moves.append(MoveRecord("RowCommute", {"r": r}, CommuteClass.NON_INTERLEAVING.value))
                cur = commute_rows(cur, r)
                rows[r], rows[r + 1] = rows[r + 1], rows[r]
                changed = True

    offset = cur.o_in_column(0).strip
    if offset:
        row_moves.append(MoveRecord("Translate", {"h": -offset, "v": 0}))
        cur = translate(cur, -offset, 0)
    order = tuple(tags[c] for c in range(n))
    return SortPlan(order, tuple(moves), tuple(row_moves), cur)
