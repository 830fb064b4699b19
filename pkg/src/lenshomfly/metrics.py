"""Complexity measures: interleaving column pairs of the lift (scr) and the complexity triple."""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple, Sequence

from .diagram import GridDiagram, lift

__all__ = [
    "Complexity",
    "HPoint",
    "column_rows",
    "complexity",
    "h_point",
    "interleaving_pair",
    "interleaving_by_regions",
    "scr",
    "scr_by_regions",
]


class HPoint(NamedTuple):
    """Smaller and larger marking row of a column, measured from a chosen cut."""

    u: int
    v: int


class Complexity(NamedTuple):
    gn: int
    scr: int
    plan_remaining: int


def column_rows(d: GridDiagram) -> list[tuple[int, int]]:
    """``(O row, X row)`` for each column of an S^3 diagram (``p == 1``)."""
    if d.p != 1:
        raise ValueError("column_rows expects a diagram with p = 1; lift it first")
    return [(d.o_in_column(c).row, d.x_in_column(c).row) for c in range(d.n)]


def _inside(a: int, x: int, b: int, size: int) -> bool:
    return 0 < (x - a) % size < (b - a) % size


def interleaving_pair(c1: Sequence[int], c2: Sequence[int], size: int) -> bool:
    """Whether the row pairs of two columns separate each other on the cycle of ``size`` rows."""
    a, b = c1
    c, d = c2
    if len({a, b, c, d}) < 4:
        return False
    return _inside(a, c, b, size) != _inside(a, d, b, size)


def h_point(rows: Sequence[int], cut: int, size: int) -> HPoint:
    """Image of a column under the H-map for the cut placed just below row ``cut``."""
    heights = sorted((r - cut) % size for r in rows)
    return HPoint(heights[0], heights[1])


def interleaving_by_regions(c1: Sequence[int], c2: Sequence[int], size: int, cut: int = 0) -> bool:
    """Interleaving test through the open regions around ``H(c1)``.

    Equivalent to :func:`interleaving_pair` for every cut.
    """
    if len({*c1, *c2}) < 4:
        return False
    first = h_point(c1, cut, size)
    second = h_point(c2, cut, size)
    hits = sum(first.u < h < first.v for h in second)
    return hits == 1


def _lifted_columns(d: GridDiagram) -> list[tuple[int, int]]:
    """``(O row, X row)`` per column of the lift, computed without building it."""
    w, shear = d.width, d.q * d.n
    rows: dict[int, list[int]] = {}
    for slot, marks in enumerate((d.o_marks, d.x_marks)):
        for s, r in marks:
            for k in range(d.p):
                rows.setdefault((s + k * shear) % w, [0, 0])[slot] = r + k * d.n
    return [tuple(rows[c]) for c in range(w)]


def scr(d: GridDiagram) -> int:
    """Number of interleaving column pairs in the lift of ``d``."""
    cols = [(a, b) for a, b in _lifted_columns(d) if a != b]
    size = d.width
    count = 0
    for i, (a, b) in enumerate(cols):
        span = (b - a) % size
        for c, e in cols[i + 1:]:
            if len({a, b, c, e}) == 4:
                count += (0 < (c - a) % size < span) != (0 < (e - a) % size < span)
    return count


def scr_by_regions(d: GridDiagram, cut: int = 0) -> int:
    cover = lift(d)
    cols = column_rows(cover)
    return sum(interleaving_by_regions(x, y, cover.n, cut) for x, y in combinations(cols, 2))


def complexity(d: GridDiagram, plan_remaining: int = 0) -> Complexity:
    return Complexity(d.n, scr(d), plan_remaining)
