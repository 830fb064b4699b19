"""Shared fixtures: named example diagrams and a random diagram generator."""

import math
import random

from lenshomfly.moves import (
    CommuteClass,
    classify_column_commutation,
    classify_row_commutation,
    commute_columns,
    commute_rows,
)
from lenshomfly.trivial import IndexSet, build_trivial_diagram

from lenshomfly.diagram import GridDiagram, translate
from lenshomfly.laurent import LaurentPoly, parse

# Nullhomotopic knot in L(5,1) with one positive skein crossing.
B = GridDiagram(5, 1, 2, [(0, 0), (1, 1)], [(3, 0), (8, 1)])
# Its resolution, the trivial link D(0,1,0,0,1).
B0 = GridDiagram(5, 1, 2, [(0, 1), (1, 0)], [(8, 1), (3, 0)])
# Its crossing change, an unknot.
K0_FROM_B = GridDiagram(5, 1, 2, [(0, 1), (1, 0)], [(2, 0), (9, 1)])
# Knot with homology class 2 in L(5,1).
L = GridDiagram(5, 1, 3, [(1, 2), (2, 1), (12, 0)], [(12, 2), (13, 1), (14, 0)])
# Grid number 1 knot with class 3 in L(7,2).
K3 = GridDiagram(7, 2, 1, [(0, 0)], [(1, 0)])


def unknot(p: int, q: int) -> GridDiagram:
    return GridDiagram(p, q, 1, [(0, 0)], [(0, 0)])


def right_trefoil(offset: int = 2) -> GridDiagram:
    return GridDiagram(1, 0, 5, [(i, i) for i in range(5)], [(i, (i + offset) % 5) for i in range(5)])


def family_member(k: int) -> GridDiagram:
    """The k-th member of the L(5,1) family extending L (k = 1 gives L)."""
    m = k + 2
    x_marks = [(4 * m + j, m - 1 - j) for j in range(m)]
    o_marks = [(4 * m + j, m - 3 - j) for j in range(m - 2)] + [(m - 2, m - 1), (m - 1, m - 2)]
    return GridDiagram(5, 1, m, o_marks, x_marks)


def family_polynomials(count: int) -> list[LaurentPoly]:
    f = [LaurentPoly.one(), parse("1 - z")]
    while len(f) < count:
        f.append(f[-2] - parse("z") * f[-1])
    return f[:count]


def lens_parameters(p: int) -> list[int]:
    if p == 1:
        return [0]
    return [q for q in range(1, p) if math.gcd(p, q) == 1]


def random_diagram(rng: random.Random, p_max: int = 7, n_max: int = 5) -> GridDiagram:
    p = rng.randint(1, p_max)
    q = rng.choice(lens_parameters(p))
    n = rng.randint(1, n_max)
    o_rows = rng.sample(range(n), n)
    x_rows = rng.sample(range(n), n)
    o_marks = [(rng.randrange(p) * n + c, o_rows[c]) for c in range(n)]
    x_marks = [(rng.randrange(p) * n + c, x_rows[c]) for c in range(n)]
    return GridDiagram(p, q, n, o_marks, x_marks)


def random_index(rng, p_max=7, n_max=5):
    p = rng.randint(1, p_max)
    q = rng.choice(lens_parameters(p))
    counts = [0] * p
    for _ in range(rng.randint(1, n_max)):
        counts[rng.randrange(p)] += 1
    return IndexSet(p, q, counts)


def random_grid_number_one(rng, p_max=7, n_max=5):
    index = random_index(rng, p_max, n_max)
    d = build_trivial_diagram(index)
    for _ in range(12):
        if rng.random() < 0.5:
            j = rng.randrange(d.n)
            if classify_column_commutation(d, j) is not CommuteClass.ILLEGAL:
                d = commute_columns(d, j)
        elif rng.random() < 0.5:
            j = rng.randrange(d.n)
            if classify_row_commutation(d, j) is CommuteClass.NON_INTERLEAVING:
                d = commute_rows(d, j)
        else:
            d = translate(d, rng.randrange(40), rng.randrange(6))
    return d


def branch_measures_decrease(tree) -> bool:
    """Check every branch of a skein tree against the lexicographic termination measure.

    Resolutions must lower ``(gn, scr)``. Crossing changes keep ``(gn, scr)`` at or
    below the parent, so the drop comes from the shorter remaining path.
    """
    for b in tree.branches:
        parent = tree.nodes[b.node].complexity
        resolved = tree.nodes[b.resolution_child].complexity
        changed = tree.nodes[b.change_child].complexity
        if not resolved[:2] < parent[:2]:
            return False
        if not changed[:2] <= parent[:2]:
            return False
    return True
