"""Skein-tree evaluation of the invariant.

Every diagram is driven along a deterministic *principal path* to a trivial
link: grid number reductions (column moves, non-interleaving row moves and a
destabilization) followed by a column sort. Interleaving column commutations on
the path are branch events. At a branch the value is expressed through the
diagram after the crossing change (the rest of the path) and the resolution
(evaluated recursively on its own path).

Termination is checked at every branch: both children must have a strictly
smaller ``(grid number, scr, remaining path length)`` triple than the parent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .diagram import Cell, GridDiagram, canonical_key, components, translate
from .laurent import LaurentPoly
from .metrics import Complexity, scr
from .moves import (
    CommuteClass,
    InternalInvariantViolation,
    Marking,
    MoveRecord,
    Sign,
    SkeinCrossing,
    _column_shift,
    _row_shift,
    classify_column_commutation,
    classify_row_commutation,
    column_position,
    commute_columns,
    commute_rows,
    crossing_at,
    destabilize,
    resolve,
)
from .trivial import IndexSet, build_trivial_diagram, index_set_of, sorted_trivial_form, trivial_value

__all__ = [
    "EvaluationConfig",
    "InternalInvariantViolation",
    "NotAligned",
    "PathStep",
    "ReductionStep",
    "SkeinTree",
    "TraceEntry",
    "evaluate",
    "marking_length",
    "principal_path",
    "reduce_grid_number_step",
    "sort_columns_step",
]


class NotAligned(ValueError):
    invariant = "NotAligned"


def marking_length(d: GridDiagram, a, b, axis: str | None = None) -> int:
    """Shorter arc length between two markings sharing a row or a column.

    ``axis`` selects ``"row"`` or ``"column"`` when the markings share both.
    """
    a, b = Cell(*a), Cell(*b)
    if a == b:
        return 0
    same_row = a.row == b.row
    same_col = a.strip % d.n == b.strip % d.n
    if axis is None:
        axis = "row" if same_row else "column"
    if (axis == "row" and not same_row) or (axis == "column" and not same_col):
        raise NotAligned(f"markings {tuple(a)} and {tuple(b)} do not share a {axis}")
    w = d.width
    if axis == "row":
        dist = (b.strip - a.strip) % w
    else:
        dist = (column_position(d, b.strip, b.row, a.strip) - a.row) % w
    return min(dist, w - dist)


@dataclass(frozen=True)
class PathStep:
    before: GridDiagram
    move: MoveRecord
    crossing: SkeinCrossing | None = None


@dataclass(frozen=True)
class ReductionStep:
    moves: tuple[PathStep, ...]
    result: GridDiagram

    @property
    def branch_events(self) -> list[PathStep]:
        return [s for s in self.moves if s.crossing is not None]


class _Walker:
    """Applies moves to a diagram while following chosen markings."""

    def __init__(self, d: GridDiagram, **tracked: Cell):
        self.d = d
        self.cells = dict(tracked)
        self.steps: list[PathStep] = []

    def __getitem__(self, name: str) -> Cell:
        return self.cells[name]

    def column(self, j: int) -> None:
        d = self.d
        cls = classify_column_commutation(d, j)
        if cls is CommuteClass.ILLEGAL:
            raise InternalInvariantViolation(f"unexpected illegal column exchange at {j}")
        crossing = crossing_at(d, j)
        self.steps.append(PathStep(d, MoveRecord("ColumnCommute", {"j": j % d.n}, cls.value), crossing))
        move = _column_shift(d, j % d.n)
        self.cells = {k: move(c) for k, c in self.cells.items()}
        self.d = commute_columns(d, j)

    def row(self, r: int) -> None:
        d = self.d
        cls = classify_row_commutation(d, r)
        if cls is not CommuteClass.NON_INTERLEAVING:
            raise InternalInvariantViolation(f"row commutation {r} in a reduction is {cls.value}")
        self.steps.append(PathStep(d, MoveRecord("RowCommute", {"r": r % d.n}, cls.value)))
        move = _row_shift(d, r % d.n)
        self.cells = {k: move(c) for k, c in self.cells.items()}
        self.d = commute_rows(d, r)

    def destabilize(self, triple: list[Marking]) -> None:
        d = self.d
        params = {"triple": [[m.kind, *m.cell] for m in triple]}
        self.steps.append(PathStep(d, MoveRecord("Destabilize", params)))
        self.d = destabilize(d, triple)
        self.cells = {}

    def shorten_vertically(self, mover: str, anchor: str) -> None:
        """Row-commute the row of ``mover`` until it sits next to ``anchor`` in its column."""
        while True:
            d, m, a = self.d, self.cells[mover], self.cells[anchor]
            length = marking_length(d, m, a, "column")
            if length <= 1:
                return
            w = d.width
            dist = (column_position(d, a.strip, a.row, m.strip) - m.row) % w
            r = m.row if dist < w - dist else (m.row - 1) % d.n
            self.row(r)
            if marking_length(self.d, self.cells[mover], self.cells[anchor], "column") >= length:
                raise InternalInvariantViolation("row commutation failed to shorten a vertical arc")


def _select_triple(d: GridDiagram) -> tuple[Cell, Cell, Cell] | None:
    decomposition = components(d)
    best = None
    for oi, o in enumerate(d.o_marks):
        if decomposition[decomposition.o_labels[oi]].grid_number == 1:
            continue
        x1 = d.x_in_column(o.strip % d.n)
        x2 = d.x_in_row(o.row)
        key = (marking_length(d, x1, o, "column"), o.strip % d.n, o.row)
        if best is None or key < best[0]:
            best = (key, (x1, o, x2))
    return None if best is None else best[1]


def reduce_grid_number_step(d: GridDiagram) -> ReductionStep:
    """Column moves, row moves and one destabilization lowering the grid number."""
    triple = _select_triple(d)
    if triple is None:
        raise ValueError("every component already has grid number 1")
    x1, o1, x2 = triple
    o2 = d.o_in_column(x2.strip % d.n)
    x3 = d.x_in_row(o2.row)
    walk = _Walker(d, x1=x1, o1=o1, x2=x2, o2=o2, x3=x3)

    blocked = False
    while True:
        cur = walk.d
        length = marking_length(cur, walk["o1"], walk["x2"], "row")
        if length <= 1:
            break
        w, n = cur.width, cur.n
        dist = (walk["o1"].strip - walk["x2"].strip) % w
        c2 = walk["x2"].strip % n
        j = c2 if dist < w - dist else (c2 - 1) % n
        if classify_column_commutation(cur, j) is CommuteClass.ILLEGAL:
            if marking_length(cur, walk["o2"], walk["x3"], "row") == 1:
                blocked = True
                break
            raise InternalInvariantViolation(f"column move blocked at {j} by markings outside the triple")
        walk.column(j)
        if marking_length(walk.d, walk["o1"], walk["x2"], "row") >= length:
            raise InternalInvariantViolation("column commutation failed to shorten a horizontal arc")

    if not blocked:
        walk.shorten_vertically("o1", "x1")
        walk.destabilize([Marking("X", walk["x1"]), Marking("O", walk["o1"]), Marking("X", walk["x2"])])
    else:
        cur = walk.d
        o3 = cur.o_in_column(walk["x3"].strip % cur.n)
        walk.cells["o3"] = o3
        if marking_length(cur, walk["x3"], o3, "column") >= marking_length(cur, walk["x2"], walk["o2"], "column"):
            walk.shorten_vertically("o2", "x2")
            walk.destabilize([Marking("X", walk["x2"]), Marking("O", walk["o2"]), Marking("X", walk["x3"])])
        else:
            walk.shorten_vertically("x3", "o3")
            walk.destabilize([Marking("O", walk["o2"]), Marking("X", walk["x3"]), Marking("O", walk["o3"])])
    if walk.d.n >= d.n:
        raise InternalInvariantViolation("reduction step did not lower the grid number")
    return ReductionStep(tuple(walk.steps), walk.d)


def sort_columns_step(d: GridDiagram) -> ReductionStep:
    """Carry a diagram of grid number 1 components onto its standard trivial diagram."""
    plan = sorted_trivial_form(d)
    cur = d
    steps: list[PathStep] = []
    for move in plan.column_moves + plan.row_moves:
        if move.kind == "ColumnCommute":
            j = move.params["j"]
            cls = classify_column_commutation(cur, j)
            steps.append(PathStep(cur, MoveRecord(move.kind, move.params, cls.value), crossing_at(cur, j)))
            cur = commute_columns(cur, j)
        elif move.kind == "RowCommute":
            steps.append(PathStep(cur, move))
            cur = commute_rows(cur, move.params["r"])
        else:
            steps.append(PathStep(cur, move))
            cur = translate(cur, move.params["h"], move.params["v"])
    if cur != build_trivial_diagram(index_set_of(d)):
        raise InternalInvariantViolation("column sort did not reach the standard trivial diagram")
    return ReductionStep(tuple(steps), cur)


def principal_path(d: GridDiagram) -> ReductionStep:
    steps: list[PathStep] = []
    cur = d
    while any(c.grid_number > 1 for c in components(cur)):
        step = reduce_grid_number_step(cur)
        steps.extend(step.moves)
        cur = step.result
    step = sort_columns_step(cur)
    steps.extend(step.moves)
    return ReductionStep(tuple(steps), step.result)


# Skein tree ---------------------------------------------------------------------


@dataclass
class TreeNode:
    key: str
    diagram: GridDiagram
    role: str  # "leaf", "branch" or "isotopy"
    complexity: Complexity
    value: LaurentPoly | None = None


@dataclass(frozen=True)
class TreeEdge:
    source: str
    target: str
    relation: str  # "isotopy", "change" or "resolution"
    moves: tuple[MoveRecord, ...]


@dataclass(frozen=True)
class BranchRecord:
    node: str
    left_column: int
    sign: Sign
    change_child: str
    resolution_child: str


@dataclass(frozen=True)
class LeafRecord:
    node: str
    index: IndexSet
    value: LaurentPoly


@dataclass(frozen=True)
class TraceEntry:
    move: MoveRecord
    complexity: Complexity
    key: str


def branch_value(sign: Sign, p: int, changed: LaurentPoly, resolved: LaurentPoly) -> LaurentPoly:
    """Value of a diagram from its crossing change and its resolution."""
    if sign is Sign.POSITIVE:
        return changed.shift(2 * p) + resolved.shift(p, 1)
    return changed.shift(-2 * p) - resolved.shift(-p, 1)


@dataclass
class SkeinTree:
    root: str = ""
    p: int = 1
    nodes: dict[str, TreeNode] = field(default_factory=dict)
    edges: list[TreeEdge] = field(default_factory=list)
    branches: list[BranchRecord] = field(default_factory=list)
    leaves: list[LeafRecord] = field(default_factory=list)
    u_bound: int = 0
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def value(self) -> LaurentPoly:
        return self.nodes[self.root].value

    def replay(self) -> LaurentPoly:
        """Recompute the root value from leaf values and the recorded relations only."""
        leaf_values = {leaf.node: leaf.value for leaf in self.leaves}
        branch_by_node = {b.node: b for b in self.branches}
        next_by_node = {e.source: e.target for e in self.edges if e.relation == "isotopy"}
        cache: dict[str, LaurentPoly] = {}

        def children(node: str) -> list[str]:
            if node in leaf_values:
                return []
            if node in branch_by_node:
                b = branch_by_node[node]
                return [b.change_child, b.resolution_child]
            return [next_by_node[node]]

        stack = [(self.root, False)]
        while stack:
            node, ready = stack.pop()
            if node in cache:
                continue
            if not ready:
                stack.append((node, True))
                stack += [(c, False) for c in children(node) if c not in cache]
                continue
            if node in leaf_values:
                cache[node] = leaf_values[node]
            elif node in branch_by_node:
                b = branch_by_node[node]
                cache[node] = branch_value(b.sign, self.p, cache[b.change_child], cache[b.resolution_child])
            else:
                cache[node] = cache[next_by_node[node]]
        return cache[self.root]

    def to_dict(self) -> dict[str, Any]:
        return {
            "root": self.root,
            "u_bound": self.u_bound,
            "nodes": [
                {
                    "key": n.key,
                    "role": n.role,
                    "diagram": n.diagram.to_dict(),
                    "complexity": list(n.complexity),
                    "value": str(n.value),
                }
                for n in self.nodes.values()
            ],
            "edges": [
                {"source": e.source, "target": e.target, "relation": e.relation, "moves": [m.to_dict() for m in e.moves]}
                for e in self.edges
            ],
            "branches": [
                {
                    "node": b.node,
                    "left_column": b.left_column,
                    "sign": b.sign.value,
                    "change_child": b.change_child,
                    "resolution_child": b.resolution_child,
                }
                for b in self.branches
            ],
            "leaves": [{"node": l.node, "index": list(l.index.m), "value": str(l.value)} for l in self.leaves],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        ids = {key: f"n{i}" for i, key in enumerate(self.nodes)}
        lines = ["digraph skein {", "  node [shape=box, fontname=monospace];"]
        for key, node in self.nodes.items():
            label = f"{node.role} gn={node.complexity.gn} scr={node.complexity.scr}\\n{node.value}"
            lines.append(f'  {ids[key]} [label="{label}"];')
        for e in self.edges:
            style = {"isotopy": "dashed", "change": "solid", "resolution": "bold"}[e.relation]
            lines.append(f'  {ids[e.source]} -> {ids[e.target]} [label="{e.relation} ({len(e.moves)})", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def trace_dict(self) -> list[dict[str, Any]]:
        return [
            {**t.move.to_dict(), "complexity": list(t.complexity), "key": t.key}
            for t in self.trace
        ]


@dataclass(frozen=True)
class EvaluationConfig:
    normalization: Mapping[tuple[int, ...], LaurentPoly] | None = None
    trace: bool = False


class _Evaluator:
    def __init__(self, config: EvaluationConfig, tree: SkeinTree):
        self.config = config
        self.tree = tree
        self.pending: set[str] = set()

    @staticmethod
    def key(d: GridDiagram) -> str:
        return canonical_key(d).decode()

    def _add_node(self, key: str, d: GridDiagram, role: str, cx: Complexity, value: LaurentPoly) -> None:
        self.tree.nodes[key] = TreeNode(key, d, role, cx, value)

    def expand(self, d: GridDiagram) -> str:
        """Evaluate ``d`` (and everything it depends on), returning its node key."""
        root_key = self.key(d)
        if root_key in self.tree.nodes:
            return root_key
        path = principal_path(d)
        steps = path.moves
        total = len(steps)

        # chain entries: (role, diagram, position on the path, moves since the previous entry)
        chain: list[tuple[str, GridDiagram, int, list[MoveRecord]]] = [("isotopy", d, 0, [])]
        last = 0
        for i, step in enumerate(steps):
            if step.crossing is None:
                continue
            chain.append(("branch", step.before, i, [s.move for s in steps[last:i]]))
            change = MoveRecord("CrossingChange", {"j": step.crossing.left_column}, CommuteClass.INTERLEAVING.value)
            chain.append(("isotopy", commute_columns(step.before, step.crossing.left_column), i + 1, [change]))
            last = i + 1
        chain.append(("leaf", path.result, total, [s.move for s in steps[last:]]))

        # merge consecutive entries for the same diagram and stop at known nodes
        entries: list[dict[str, Any]] = []
        for role, diagram, pos, moves in chain:
            key = root_key if pos == 0 else self.key(diagram)
            if entries and entries[-1]["key"] == key:
                prev = entries[-1]
                if role == "branch":
                    prev["role"], prev["pos"], prev["diagram"] = role, pos, diagram
                elif role == "leaf" and prev["role"] != "branch":
                    prev["role"] = role
                continue
            entries.append({"key": key, "role": role, "diagram": diagram, "pos": pos, "moves": moves})
            if key in self.tree.nodes:
                entries[-1]["role"] = "known"
                break
            if key in self.pending:
                raise InternalInvariantViolation("principal path revisits a diagram under evaluation")
        self.pending.update(e["key"] for e in entries if e["role"] != "known")

        if root_key == self.tree.root:
            self.tree.u_bound = sum(1 for s in steps if s.crossing is not None)
            if self.config.trace:
                self.tree.trace = self._trace(steps)

        following: LaurentPoly | None = None
        following_key = ""
        for idx in range(len(entries) - 1, -1, -1):
            e = entries[idx]
            key, diagram, pos = e["key"], e["diagram"], e["pos"]
            if e["role"] == "known":
                following, following_key = self.tree.nodes[key].value, key
                continue
            cx = Complexity(diagram.n, scr(diagram), total - pos)
            if e["role"] == "leaf" and idx == len(entries) - 1:
                index = index_set_of(diagram)
                value = trivial_value(index, self.config.normalization)
                self.tree.leaves.append(LeafRecord(key, index, value))
                self._add_node(key, diagram, "leaf", cx, value)
            elif e["role"] == "branch":
                crossing = steps[pos].crossing
                change_key = following_key
                change_node = self.tree.nodes[change_key]
                resolved = resolve(diagram, crossing)
                res_key = self.expand(resolved)
                res_node = self.tree.nodes[res_key]
                for child in (change_node, res_node):
                    child_cx = child.complexity
                    if child is change_node:
                        child_cx = Complexity(child_cx.gn, child_cx.scr, total - pos - 1)
                    if not child_cx < cx:
                        raise InternalInvariantViolation(
                            f"termination measure did not decrease at a branch: {tuple(cx)} -> {tuple(child_cx)}"
                        )
                value = branch_value(crossing.sign, diagram.p, following, res_node.value)
                self.tree.branches.append(BranchRecord(key, crossing.left_column, crossing.sign, change_key, res_key))
                self.tree.edges.append(
                    TreeEdge(key, res_key, "resolution", (MoveRecord("Resolve", {"j": crossing.left_column, "sign": crossing.sign.value}),))
                )
                self._add_node(key, diagram, "branch", cx, value)
            else:
                value = following
                self._add_node(key, diagram, "isotopy", cx, value)
            if idx + 1 < len(entries):
                nxt = entries[idx + 1]
                relation = "change" if e["role"] == "branch" else "isotopy"
                self.tree.edges.append(TreeEdge(key, nxt["key"], relation, tuple(nxt["moves"])))
            following, following_key = value, key
            self.pending.discard(key)
        return root_key

    def _trace(self, steps) -> list[TraceEntry]:
        out = []
        total = len(steps)
        for i, step in enumerate(steps):
            out.append(TraceEntry(step.move, Complexity(step.before.n, scr(step.before), total - i), self.key(step.before)))
        return out


def evaluate(d: GridDiagram, config: EvaluationConfig | None = None) -> tuple[LaurentPoly, SkeinTree]:
    """The invariant of the link of ``d`` and the skein tree that computes it."""
    config = config or EvaluationConfig()
    tree = SkeinTree(p=d.p)
    evaluator = _Evaluator(config, tree)
    tree.root = evaluator.key(d)
    evaluator.expand(d)
    return tree.value, tree
