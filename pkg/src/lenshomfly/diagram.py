"""Toroidal grid diagrams in the lens space L(p, q) in straightened coordinates.

A diagram with grid number ``n`` lives on ``p*n`` strips and ``n`` rows. Strip
``s`` belongs to column ``s % n`` and to block ``s // n``. Moving upward out of
row ``n-1`` re-enters row ``0`` with the strip shifted by ``-q*n`` (mod ``p*n``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

__all__ = [
    "Cell",
    "Component",
    "ComponentDecomposition",
    "DiagramError",
    "DuplicateColumn",
    "DuplicateRow",
    "GridDiagram",
    "MalformedDiagram",
    "NonCoprime",
    "SharedCellOutsideUnknot",
    "StripOutOfRange",
    "canonical_key",
    "components",
    "from_json",
    "lift",
    "mu",
    "to_json",
    "translate",
    "validate",
]


class DiagramError(ValueError):
    """Base class for violations of the grid diagram invariants."""

    invariant = "diagram"


class MalformedDiagram(DiagramError):
    invariant = "Malformed"


class NonCoprime(DiagramError):
    invariant = "NonCoprime"


class StripOutOfRange(DiagramError):
    invariant = "StripOutOfRange"


class DuplicateRow(DiagramError):
    invariant = "DuplicateRow"


class DuplicateColumn(DiagramError):
    invariant = "DuplicateColumn"


class SharedCellOutsideUnknot(DiagramError):
    invariant = "SharedCellOutsideUnknot"


class Cell(NamedTuple):
    strip: int
    row: int


def _check_lens(p: int, q: int) -> None:
    if p < 1:
        raise MalformedDiagram(f"p must be positive, got {p}")
    if not abs(q) < p:
        raise MalformedDiagram(f"q must satisfy 0 <= |q| < p, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise NonCoprime(f"gcd(p, q) must be 1, got p={p}, q={q}")


def _check_markings(p: int, q: int, n: int, o_marks: Sequence[Cell], x_marks: Sequence[Cell]) -> None:
    if n < 1:
        raise MalformedDiagram(f"grid number must be positive, got {n}")
    for name, marks in (("O", o_marks), ("X", x_marks)):
        if len(marks) != n:
            raise MalformedDiagram(f"expected {n} {name} markings, got {len(marks)}")
        for cell in marks:
            if not (0 <= cell.strip < p * n and 0 <= cell.row < n):
                raise StripOutOfRange(f"{name} marking {tuple(cell)} outside {p * n} strips x {n} rows")

    shared = set(o_marks) & set(x_marks)
    for cell in shared:
        others = [c for c in list(o_marks) + list(x_marks) if c != cell]
        if any(c.row == cell.row or c.strip % n == cell.strip % n for c in others):
            raise SharedCellOutsideUnknot(
                f"O and X share cell {tuple(cell)} but that row or column holds other markings"
            )

    for name, marks in (("O", o_marks), ("X", x_marks)):
        rows = [c.row for c in marks]
        if len(set(rows)) != n:
            raise DuplicateRow(f"two {name} markings share a row: rows {sorted(rows)}")
        cols = [c.strip % n for c in marks]
        if len(set(cols)) != n:
            raise DuplicateColumn(f"two {name} markings share a column: columns {sorted(cols)}")


def _as_cells(marks: Iterable) -> tuple[Cell, ...]:
    out = []
    for m in marks:
        try:
            strip, row = m
            out.append(Cell(int(strip), int(row)))
        except (TypeError, ValueError) as exc:
            raise MalformedDiagram(f"marking {m!r} is not a [strip, row] pair") from exc
    return tuple(out)


@dataclass(frozen=True)
class GridDiagram:
    """A validated grid diagram; marking tuples are kept sorted by column."""

    p: int
    q: int
    n: int
    o_marks: tuple[Cell, ...]
    x_marks: tuple[Cell, ...]

    def __post_init__(self):
        o_marks = _as_cells(self.o_marks)
        x_marks = _as_cells(self.x_marks)
        _check_lens(self.p, self.q)
        _check_markings(self.p, self.q, self.n, o_marks, x_marks)
        key = lambda c: (c.strip % self.n, c.strip, c.row)  # noqa: E731
        object.__setattr__(self, "o_marks", tuple(sorted(o_marks, key=key)))
        object.__setattr__(self, "x_marks", tuple(sorted(x_marks, key=key)))

    @property
    def width(self) -> int:
        """Number of strips, ``p * n``."""
        return self.p * self.n

    @property
    def shear(self) -> int:
        """Strip shift applied when crossing the top edge upward."""
        return (self.q * self.n) % self.width

    @property
    def q_inverse(self) -> int:
        return pow(self.q % self.p, -1, self.p) if self.p > 1 else 0

    def column(self, cell: Cell) -> int:
        return cell.strip % self.n

    def o_in_column(self, col: int) -> Cell:
        return next(c for c in self.o_marks if c.strip % self.n == col)

    def x_in_column(self, col: int) -> Cell:
        return next(c for c in self.x_marks if c.strip % self.n == col)

    def o_in_row(self, row: int) -> Cell:
        return next(c for c in self.o_marks if c.row == row)

    def x_in_row(self, row: int) -> Cell:
        return next(c for c in self.x_marks if c.row == row)

    def reversed(self) -> "GridDiagram":
        """The diagram with every O exchanged for an X and vice versa."""
        return GridDiagram(self.p, self.q, self.n, self.x_marks, self.o_marks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "O": [list(c) for c in self.o_marks],
            "X": [list(c) for c in self.x_marks],
        }


def validate(candidate: Any) -> GridDiagram:
    """Check raw diagram data (a mapping in the document format, or a diagram)."""
    if isinstance(candidate, GridDiagram):
        return GridDiagram(candidate.p, candidate.q, candidate.n, candidate.o_marks, candidate.x_marks)
    if not isinstance(candidate, Mapping):
        raise MalformedDiagram("diagram document must be an object with fields p, q, n, O, X")
    missing = [k for k in ("p", "q", "n", "O", "X") if k not in candidate]
    if missing:
        raise MalformedDiagram(f"diagram document is missing fields: {', '.join(missing)}")
    try:
        p, q, n = (int(candidate[k]) for k in ("p", "q", "n"))
    except (TypeError, ValueError) as exc:
        raise MalformedDiagram("p, q and n must be integers") from exc
    return GridDiagram(p, q, n, _as_cells(candidate["O"]), _as_cells(candidate["X"]))


def to_json(diagram: GridDiagram) -> str:
    return json.dumps(diagram.to_dict(), separators=(",", ":"))


def from_json(text: str) -> GridDiagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDiagram(f"invalid JSON: {exc}") from exc
    return validate(data)


# Components and homology -----------------------------------------------------


@dataclass(frozen=True)
class Component:
    o_indices: tuple[int, ...]
    x_indices: tuple[int, ...]
    mu: int

    @property
    def grid_number(self) -> int:
        return len(self.o_indices)


@dataclass(frozen=True)
class ComponentDecomposition:
    """Component labels for each O and X index, plus per-component data."""

    o_labels: tuple[int, ...]
    x_labels: tuple[int, ...]
    components: tuple[Component, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, index: int) -> Component:
        return self.components[index]

    @property
    def mus(self) -> list[int]:
        return [c.mu for c in self.components]


def _vertical_travel(d: GridDiagram, o: Cell, x: Cell) -> int:
    """Number of upward top-edge crossings from ``o`` to ``x`` along their column."""
    if d.p == 1:
        return 0
    shift = (o.strip - x.strip) % d.width
    return (d.q_inverse * (shift // d.n)) % d.p


def components(d: GridDiagram) -> ComponentDecomposition:
    n = d.n
    x_by_col = {c.strip % n: i for i, c in enumerate(d.x_marks)}
    o_by_row = {c.row: i for i, c in enumerate(d.o_marks)}

    o_labels = [-1] * n
    x_labels = [-1] * n
    comps = []
    for start in range(n):
        if o_labels[start] != -1:
            continue
        label = len(comps)
        os, xs = [], []
        mu_total = 0
        oi = start
        while o_labels[oi] == -1:
            o_labels[oi] = label
            os.append(oi)
            o = d.o_marks[oi]
            xi = x_by_col[o.strip % n]
            x_labels[xi] = label
            xs.append(xi)
            mu_total += _vertical_travel(d, o, d.x_marks[xi])
            # the horizontal arc leaves X and ends at the O in the same row
            oi = o_by_row[d.x_marks[xi].row]
        comps.append(Component(tuple(os), tuple(xs), mu_total % d.p if d.p > 1 else 0))
    return ComponentDecomposition(tuple(o_labels), tuple(x_labels), tuple(comps))


def mu(d: GridDiagram, component: int | Component = 0) -> int:
    """Homology class in Z/p of one component (by index or component record)."""
    if isinstance(component, Component):
        return component.mu
    return components(d).components[component].mu


# Lift, translation, canonical key -------------------------------------------


def lift(d: GridDiagram) -> GridDiagram:
    """The p-fold lift to S^3: a diagram with p' = 1, q' = 0 and grid number p*n."""
    if d.p == 1:
        return d
    w, shear = d.width, d.q * d.n

    def copies(marks):
        return [Cell((c.strip + k * shear) % w, c.row + k * d.n) for c in marks for k in range(d.p)]

    return GridDiagram(1, 0, w, copies(d.o_marks), copies(d.x_marks))


def _translate_cell(d: GridDiagram, cell: Cell, h: int, v: int) -> Cell:
    wraps, row = divmod(cell.row + v, d.n)
    return Cell((cell.strip + h - wraps * d.q * d.n) % d.width, row)


def translate(d: GridDiagram, h: int, v: int) -> GridDiagram:
    """Shift by ``h`` strips to the right and ``v`` rows upward (with wrap shear)."""
    return GridDiagram(
        d.p,
        d.q,
        d.n,
        [_translate_cell(d, c, h, v) for c in d.o_marks],
        [_translate_cell(d, c, h, v) for c in d.x_marks],
    )


def canonical_key(d: GridDiagram) -> bytes:
    """Minimal serialization over all ``p*n*n`` translations of the diagram.

    The minimum always places some O marking in strip 0, so only the ``n*n``
    translations doing that are compared.
    """
    n, w, shear = d.n, d.width, d.q * d.n
    best = None
    for v in range(n):
        shifted_o = [((s - ((r + v) // n) * shear) % w, (r + v) % n) for s, r in d.o_marks]
        shifted_x = [((s - ((r + v) // n) * shear) % w, (r + v) % n) for s, r in d.x_marks]
        for anchor, _ in shifted_o:
            os_ = sorted(((s - anchor) % w, r) for s, r in shifted_o)
            if best is not None and os_ > best[0]:
                continue
            xs = sorted(((s - anchor) % w, r) for s, r in shifted_x)
            cand = (os_, xs)
            if best is None or cand < best:
                best = cand
    o_part = ";".join(f"{s},{r}" for s, r in best[0])
    x_part = ";".join(f"{s},{r}" for s, r in best[1])
    return f"{d.p}/{d.q % d.p if d.p > 1 else 0}/{n}|{o_part}|{x_part}".encode()
