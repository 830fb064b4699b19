import json
import math
import random

import pytest

from lenshomfly.diagram import (
    Cell,
    DuplicateColumn,
    DuplicateRow,
    GridDiagram,
    MalformedDiagram,
    NonCoprime,
    SharedCellOutsideUnknot,
    StripOutOfRange,
    canonical_key,
    components,
    from_json,
    lift,
    mu,
    to_json,
    translate,
    validate,
)
from lenshomfly.trivial import IndexSet, build_trivial_diagram
from support import B, B0, K0_FROM_B, K3, L, random_diagram, unknot


def test_valid_example():
    assert validate({"p": 5, "q": 1, "n": 2, "O": [[0, 0], [1, 1]], "X": [[3, 0], [8, 1]]}) == B


@pytest.mark.parametrize(
    "doc, error",
    [
        ({"p": 5, "q": 1, "n": 2, "O": [[0, 0], [2, 1]], "X": [[3, 0], [8, 1]]}, DuplicateColumn),
        ({"p": 5, "q": 1, "n": 2, "O": [[0, 0], [1, 0]], "X": [[3, 0], [8, 1]]}, DuplicateRow),
        ({"p": 4, "q": 2, "n": 1, "O": [[0, 0]], "X": [[0, 0]]}, NonCoprime),
        ({"p": 5, "q": 1, "n": 2, "O": [[0, 0], [11, 1]], "X": [[3, 0], [8, 1]]}, StripOutOfRange),
        ({"p": 5, "q": 1, "n": 2, "O": [[0, 0], [1, 2]], "X": [[3, 0], [8, 1]]}, StripOutOfRange),
        ({"p": 5, "q": 1, "n": 2, "O": [[0, 0]], "X": [[3, 0], [8, 1]]}, MalformedDiagram),
        ({"p": 5, "q": 1, "O": [[0, 0]], "X": [[3, 0]]}, MalformedDiagram),
        ({"p": 5, "q": 7, "n": 1, "O": [[0, 0]], "X": [[0, 0]]}, MalformedDiagram),
        ({"p": 5, "q": 1, "n": 1, "O": [["a", 0]], "X": [[0, 0]]}, MalformedDiagram),
        ({"p": 1, "q": 0, "n": 2, "O": [[0, 0], [1, 1]], "X": [[0, 0], [1, 0]]}, SharedCellOutsideUnknot),
    ],
)
def test_validation_errors(doc, error):
    with pytest.raises(error) as info:
        validate(doc)
    assert info.value.invariant == error.invariant


def test_coincident_markings_allowed_for_isolated_unknot():
    d = GridDiagram(5, 1, 2, [(0, 0), (1, 1)], [(0, 0), (3, 1)])
    assert len(components(d)) == 2


def test_json_round_trip():
    rng = random.Random(11)
    for _ in range(50):
        d = random_diagram(rng)
        assert from_json(to_json(d)) == d
        assert validate(json.loads(to_json(d))) == d


def test_from_json_rejects_bad_text():
    with pytest.raises(MalformedDiagram):
        from_json("{not json")
    with pytest.raises(MalformedDiagram):
        from_json("[1, 2]")


def test_component_examples():
    (comp,) = components(B)
    assert comp.grid_number == 2 and comp.mu == 0
    dec = components(B0)
    assert [c.grid_number for c in dec] == [1, 1]
    assert sorted(dec.mus) == [1, 4]
    d = build_trivial_diagram(IndexSet(5, 2, (0, 1, 2, 0, 3)))
    assert sorted(components(d).mus) == sorted([1, 4, 4, 4, 2, 2])


def test_homology_examples():
    assert mu(K3) == 3
    assert mu(unknot(7, 2)) == 0
    assert mu(B) == 0
    assert mu(L) == 2


def test_lift_example():
    cover = lift(B0)
    assert (cover.p, cover.q, cover.n) == (1, 0, 10)
    images = {Cell(8, 1), Cell(0, 3), Cell(2, 5), Cell(4, 7), Cell(6, 9)}
    assert images <= set(cover.x_marks)
    assert lift(B) != B
    assert lift(unknot(1, 0)) == unknot(1, 0)


def test_lift_of_nullhomotopic_unknot_in_lens_space():
    cover = lift(build_trivial_diagram(IndexSet(5, 2, (1, 0, 0, 0, 0))))
    dec = components(cover)
    assert len(dec) == 5 and all(c.grid_number == 1 for c in dec)


def test_lift_component_count_matches_covering_count():
    rng = random.Random(5)
    for _ in range(150):
        d = random_diagram(rng, 7, 4)
        expected = sum(math.gcd(m, d.p) for m in components(d).mus)
        assert len(components(lift(d))) == expected


def test_translate_examples():
    assert translate(B, 1, 0) == GridDiagram(5, 1, 2, [(1, 0), (2, 1)], [(4, 0), (9, 1)])
    rng = random.Random(2)
    for _ in range(40):
        d = random_diagram(rng)
        assert translate(d, d.width, 0) == d
        assert translate(d, 0, d.n) == translate(d, -d.q * d.n, 0)
        assert sorted(components(translate(d, 3, 1)).mus) == sorted(components(d).mus)


def test_canonical_key():
    rng = random.Random(3)
    for _ in range(60):
        d = random_diagram(rng)
        h, v = rng.randrange(40), rng.randrange(8)
        assert canonical_key(d) == canonical_key(translate(d, h, v))
        assert canonical_key(d) == canonical_key(d)
    assert canonical_key(B) != canonical_key(K0_FROM_B)


def test_canonical_key_is_minimum_over_all_translations():
    rng = random.Random(4)
    for _ in range(30):
        d = random_diagram(rng, 5, 4)

        def serial(e):
            return (sorted(e.o_marks), sorted(e.x_marks))

        best = min(serial(translate(d, h, v)) for h in range(d.width) for v in range(d.n))
        other = next(
            translate(d, h, v) for h in range(d.width) for v in range(d.n) if serial(translate(d, h, v)) == best
        )
        assert canonical_key(other) == canonical_key(d)
