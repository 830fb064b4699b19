import random

import pytest

from lenshomfly.diagram import Cell, GridDiagram, canonical_key, components, translate, _translate_cell
from lenshomfly.metrics import scr
from lenshomfly.moves import (
    STABILIZATION_VARIANTS,
    CommuteClass,
    IllegalExchange,
    Marking,
    NotDestabilizable,
    Sign,
    classify_column_commutation,
    classify_row_commutation,
    commute_columns,
    commute_rows,
    crossing_at,
    crossing_change,
    destabilize,
    find_skein_crossings,
    resolve,
    segment_index,
    stabilization_triple,
    stabilize,
)
from lenshomfly.trivial import IndexSet, build_trivial_diagram
from support import B, B0, K0_FROM_B, L, random_diagram, unknot

FIG4 = GridDiagram(7, 2, 4, [(17, 1), (10, 0), (16, 2), (19, 3)], [(1, 3), (2, 2), (24, 1), (3, 0)])


def test_segment_indices():
    assert [segment_index(B, c, 0) for c in [(0, 0), (1, 1), (8, 1), (3, 0)]] == [0, 1, 3, 8]
    assert [segment_index(L, c, 0) for c in [(12, 0), (12, 2), (1, 2), (13, 1)]] == [3, 5, 2, 4]
    d = GridDiagram(1, 0, 3, [(0, 0), (1, 2), (2, 1)], [(0, 2), (1, 1), (2, 0)])
    assert [segment_index(d, c, 0) for c in [*d.o_marks[:2], *d.x_marks[:2]]] == [0, 2, 2, 1]


def test_column_classification_examples():
    assert classify_column_commutation(B, 0) is CommuteClass.INTERLEAVING
    assert classify_column_commutation(FIG4, 1) is CommuteClass.NON_INTERLEAVING
    # an x and an o horizontally adjacent in one row
    adjacent = GridDiagram(1, 0, 2, [(0, 0), (1, 1)], [(0, 1), (1, 0)])
    assert classify_column_commutation(adjacent, 0) is CommuteClass.ILLEGAL
    assert classify_column_commutation(unknot(5, 1), 0) is CommuteClass.ILLEGAL


def test_row_classification_examples():
    alternating = GridDiagram(1, 0, 4, [(0, 0), (1, 1), (2, 2), (3, 3)], [(2, 0), (3, 1), (0, 2), (1, 3)])
    assert classify_row_commutation(alternating, 0) is CommuteClass.INTERLEAVING
    shared = GridDiagram(1, 0, 2, [(0, 0), (1, 1)], [(1, 0), (0, 1)])
    assert classify_row_commutation(shared, 0) is CommuteClass.ILLEGAL
    d = build_trivial_diagram(IndexSet(5, 2, (0, 1, 2, 0, 3)))
    dec = components(d)
    class_of_row = {d.o_marks[i].row: comp.mu for comp in dec for i in comp.o_indices}
    distinct = [r for r in range(d.n - 1) if class_of_row[r] != class_of_row[r + 1]]
    assert distinct == [1, 4]
    for r in distinct:
        assert classify_row_commutation(d, r) is CommuteClass.NON_INTERLEAVING


def test_commute_columns_example_and_involution():
    plus = commute_columns(L, 0)
    assert plus == GridDiagram(5, 1, 3, [(13, 0), (0, 2), (2, 1)], [(13, 2), (12, 1), (14, 0)])
    assert commute_columns(plus, 0) == L
    with pytest.raises(IllegalExchange):
        commute_columns(GridDiagram(1, 0, 2, [(0, 0), (1, 1)], [(0, 1), (1, 0)]), 0)


def test_commutations_on_random_diagrams():
    rng = random.Random(8)
    for _ in range(150):
        d = random_diagram(rng)
        mus = sum(components(d).mus) % d.p
        for j in range(d.n if d.n > 1 else 0):
            if classify_column_commutation(d, j) is not CommuteClass.ILLEGAL:
                e = commute_columns(d, j)
                assert commute_columns(e, j) == d
                assert scr(e) == scr(d)
                assert sum(components(e).mus) % d.p == mus
            if classify_row_commutation(d, j) is not CommuteClass.ILLEGAL:
                e = commute_rows(d, j)
                assert commute_rows(e, j) == d
                assert sum(components(e).mus) % d.p == mus


def test_skein_crossing_signs():
    assert crossing_at(B, 0) in find_skein_crossings(B)
    assert crossing_at(B, 0).sign is Sign.POSITIVE
    assert crossing_at(L, 0).sign is Sign.NEGATIVE
    assert find_skein_crossings(unknot(3, 1)) == []
    assert crossing_at(FIG4, 1) is None


def test_crossing_change_examples():
    changed = crossing_change(B, crossing_at(B, 0))
    assert changed == K0_FROM_B
    assert crossing_at(changed, 0).sign is Sign.NEGATIVE
    plus = crossing_change(L, crossing_at(L, 0))
    assert crossing_at(plus, 0).sign is Sign.POSITIVE
    assert crossing_change(plus, crossing_at(plus, 0)) == L


def test_resolve_examples():
    assert resolve(B, crossing_at(B, 0)) == B0
    zero = resolve(L, crossing_at(L, 0))
    assert set(zero.x_marks) == {Cell(13, 2), Cell(12, 1), Cell(14, 0)}
    assert set(zero.o_marks) == set(L.o_marks)
    with pytest.raises(IllegalExchange):
        resolve(B0, crossing_at(B, 0))


def test_resolution_conserves_total_homology():
    rng = random.Random(9)
    for _ in range(200):
        d = random_diagram(rng)
        for c in find_skein_crossings(d):
            assert sum(components(resolve(d, c)).mus) % d.p == sum(components(d).mus) % d.p


def test_stabilize_example_round_trip():
    k0 = unknot(5, 1)
    s = stabilize(k0, Marking("X", Cell(0, 0)), "X:NW")
    assert s.n == 2
    assert destabilize(s, stabilization_triple(k0, Marking("X", Cell(0, 0)), "X:NW")) == k0


def test_stabilize_rejects_bad_arguments():
    with pytest.raises(ValueError):
        stabilize(B, Marking("X", Cell(3, 0)), "O:NW")
    with pytest.raises(ValueError):
        stabilize(B, Marking("X", Cell(3, 0)), "X:UP")
    with pytest.raises(ValueError):
        stabilize(B, Marking("X", Cell(4, 0)), "X:NW")


def test_stabilize_destabilize_all_variants():
    rng = random.Random(10)
    for _ in range(120):
        d = random_diagram(rng, 7, 4)
        mus = sorted(components(d).mus)
        for variant in STABILIZATION_VARIANTS:
            kind = variant[0]
            cell = rng.choice(d.o_marks if kind == "O" else d.x_marks)
            s = stabilize(d, Marking(kind, cell), variant)
            assert s.n == d.n + 1
            assert sorted(components(s).mus) == mus
            triple = stabilization_triple(d, Marking(kind, cell), variant)
            assert destabilize(s, triple) == d
            h, v = rng.randrange(60), rng.randrange(8)
            moved = [Marking(m.kind, _translate_cell(s, m.cell, h, v)) for m in triple]
            back = destabilize(translate(s, h, v), moved)
            assert canonical_key(back) == canonical_key(d)
            assert sorted(components(back).mus) == mus


def test_destabilize_rejects_non_corner_triples():
    with pytest.raises(NotDestabilizable):
        destabilize(B, [Marking("X", Cell(4, 1)), Marking("O", Cell(5, 1)), Marking("X", Cell(5, 0))])
    with pytest.raises(NotDestabilizable):
        destabilize(B, [Marking("O", Cell(0, 0)), Marking("X", Cell(3, 0)), Marking("O", Cell(1, 1))])
    with pytest.raises(NotDestabilizable):
        destabilize(unknot(3, 1), [Marking("O", Cell(0, 0))] * 3)
