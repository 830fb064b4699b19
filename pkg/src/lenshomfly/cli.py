"""Command-line interface: ``lenshomfly <command> ...``.

Exit status is 0 on success, 1 for invalid input and 2 when an internal
invariant of the evaluator fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .diagram import GridDiagram, components, from_json, lift, to_json
from .engine import EvaluationConfig, evaluate
from .metrics import scr
from .moves import (
    InternalInvariantViolation,
    Marking,
    STABILIZATION_VARIANTS,
    commute_columns,
    commute_rows,
    crossing_at,
    crossing_change,
    destabilize,
    resolve,
    stabilize,
)
from .trivial import IndexSet, build_trivial_diagram, load_normalization

MOVE_OPS = ("commute-cols", "commute-rows", "stabilize", "destabilize", "resolve", "crossing-change")


class UsageError(ValueError):
    invariant = "Usage"


def _read_diagram(path: str) -> GridDiagram:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return from_json(text)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None


def _parse_marking(text: str) -> Marking:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3 or parts[0].upper() not in ("O", "X"):
        raise UsageError(f"marking must look like KIND,STRIP,ROW (e.g. X,3,0), got {text!r}")
    return Marking(parts[0].upper(), (_int(parts[1], "strip"), _int(parts[2], "row")))


def _apply_move(d: GridDiagram, op: str, at: str) -> GridDiagram:
    if op == "commute-cols":
        return commute_columns(d, _int(at, "column"))
    if op == "commute-rows":
        return commute_rows(d, _int(at, "row"))
    if op in ("resolve", "crossing-change"):
        j = _int(at, "column")
        crossing = crossing_at(d, j)
        if crossing is None:
            raise UsageError(f"columns {j % d.n} and {(j + 1) % d.n} do not form a skein crossing")
        return resolve(d, crossing) if op == "resolve" else crossing_change(d, crossing)
    if op == "stabilize":
        variant, _, cell = at.partition(",")
        if variant.upper() not in STABILIZATION_VARIANTS:
            raise UsageError(f"stabilize expects VARIANT,STRIP,ROW with VARIANT in {', '.join(STABILIZATION_VARIANTS)}")
        marking = _parse_marking(f"{variant[0]},{cell}")
        return stabilize(d, marking, variant.upper())
    if op == "destabilize":
        triple = [_parse_marking(m) for m in at.split(";")]
        if len(triple) != 3:
            raise UsageError("destabilize expects three markings separated by ';'")
        return destabilize(d, triple)
    raise UsageError(f"unknown move {op!r}")


def _info(d: GridDiagram) -> dict:
    decomposition = components(d)
    return {
        "p": d.p,
        "q": d.q,
        "n": d.n,
        "components": len(decomposition),
        "grid_numbers": [c.grid_number for c in decomposition],
        "mu": decomposition.mus,
        "scr": scr(d),
    }


def _info_text(info: dict) -> str:
    return "\n".join(
        [
            f"p={info['p']} q={info['q']} n={info['n']}",
            f"components={info['components']}",
            "grid_numbers=" + ",".join(map(str, info["grid_numbers"])),
            "mu=" + ",".join(map(str, info["mu"])),
            f"scr={info['scr']}",
        ]
    )


def _config(args) -> EvaluationConfig:
    table = load_normalization(args.normalization) if args.normalization else None
    return EvaluationConfig(normalization=table, trace=bool(getattr(args, "trace", None)))


def _emit(args, text_value: str, json_value) -> None:
    if args.format == "json":
        print(json.dumps(json_value, separators=(",", ":")))
    else:
        print(text_value)


def _run(args) -> int:
    cmd = args.command
    if cmd == "trivial":
        counts = [_int(x, "index entry") for x in args.index.split(",")]
        d = build_trivial_diagram(IndexSet(args.p, args.q, counts))
        print(to_json(d))
        return 0

    d = _read_diagram(args.file)
    if cmd == "validate":
        _emit(args, "valid", {"valid": True, "diagram": d.to_dict()})
    elif cmd == "info":
        info = _info(d)
        _emit(args, _info_text(info), info)
    elif cmd == "lift":
        print(to_json(lift(d)))
    elif cmd == "scr":
        value = scr(d)
        _emit(args, str(value), {"scr": value})
    elif cmd == "move":
        print(to_json(_apply_move(d, args.op, args.at)))
    elif cmd == "homfly":
        value, tree = evaluate(d, _config(args))
        if args.trace:
            _write(args.trace, json.dumps(tree.trace_dict(), indent=2))
        if args.tree:
            _write(args.tree, tree.to_dot() if args.tree.endswith(".dot") else tree.to_json())
        _emit(args, str(value), {"value": str(value), "u_bound": tree.u_bound, "nodes": len(tree.nodes)})
    elif cmd == "tree":
        _, tree = evaluate(d, _config(args))
        print(tree.to_dot() if args.graph == "dot" else tree.to_json(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lenshomfly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="diagram document (JSON), or - for stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    with_file("validate", "check a diagram document")
    with_file("info", "grid number, components, homology classes and scr")
    with_file("lift", "print the lift to S^3")
    with_file("scr", "number of interleaving column pairs of the lift")

    trivial = sub.add_parser("trivial", help="print the standard diagram of a trivial link")
    trivial.add_argument("--p", type=int, required=True)
    trivial.add_argument("--q", type=int, required=True)
    trivial.add_argument("--index", required=True, help="comma separated counts m0,...,m(p-1)")

    move = with_file("move", "apply one grid move")
    move.add_argument("--op", choices=MOVE_OPS, required=True)
    move.add_argument(
        "--at",
        required=True,
        help="column/row index; VARIANT,STRIP,ROW for stabilize; K,S,R;K,S,R;K,S,R for destabilize",
    )

    for name, help_text in (("homfly", "evaluate the invariant"), ("tree", "print the skein tree")):
        p = with_file(name, help_text)
        p.add_argument("--normalization", help="JSON list of {index, value} overrides for trivial links")
        if name == "homfly":
            p.add_argument("--trace", help="write the principal reduction path as JSON")
            p.add_argument("--tree", help="write the skein tree (JSON, or DOT for *.dot)")
        else:
            p.add_argument("--graph", choices=("json", "dot"), default="json")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except InternalInvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        kind = getattr(exc, "invariant", type(exc).__name__)
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
