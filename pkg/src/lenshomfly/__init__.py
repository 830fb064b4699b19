"""HOMFLY-type invariant of links in lens spaces, computed from toroidal grid diagrams."""

from .diagram import GridDiagram, canonical_key, components, lift, mu, translate, validate
from .engine import EvaluationConfig, evaluate
from .laurent import LaurentPoly, parse
from .metrics import scr
from .trivial import IndexSet, build_trivial_diagram

__all__ = [
    "EvaluationConfig",
    "GridDiagram",
    "IndexSet",
    "LaurentPoly",
    "build_trivial_diagram",
    "canonical_key",
    "components",
    "evaluate",
    "lift",
    "mu",
    "parse",
    "scr",
    "translate",
    "validate",
]
