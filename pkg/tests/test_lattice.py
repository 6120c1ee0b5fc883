import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_perimeter, cell_sets, polyominoes, random_polyomino
from edentopo.lattice import (
    Codec,
    CoordinateOverflow,
    GrowthState,
    IndexedSet,
    LatticeError,
    Polyomino,
    PolyominoParseError,
    add_tile,
    boundary_area,
    is_column_convex,
    is_face_connected,
    neighbors_face,
    parse_polyomino,
    projection_volumes,
    shake,
)


def test_neighbors_order_2d():
    assert neighbors_face((0, 0)) == [(-1, 0), (1, 0), (0, -1), (0, 1)]


@pytest.mark.parametrize("d", [3, 5, 8])
def test_neighbor_count(d):
    assert len(neighbors_face((1,) * d)) == 2 * d


@given(st.integers(2, 8).flatmap(lambda d: st.tuples(*[st.integers(-1000, 1000)] * d)))
def test_codec_roundtrip_and_order(c):
    cod = Codec(len(c))
    assert cod.decode(cod.encode(c)) == c
    other = tuple(x + 1 for x in c)
    assert (cod.encode(c) < cod.encode(other)) == (c < other)
    for off, n in zip(cod.face_offsets, neighbors_face(c)):
        assert cod.decode(cod.encode(c) + off) == n


def test_codec_overflow():
    cod = Codec(2)
    with pytest.raises(CoordinateOverflow):
        cod.encode((cod.limit + 1, 0))


def test_indexed_set_swap_remove():
    s = IndexedSet(range(5))
    s.remove(1)
    assert sorted(s) == [0, 2, 3, 4]
    assert all(s.items[s.index[x]] == x for x in s)
    s.remove(4)
    s.add(7)
    assert 7 in s and 4 not in s and len(s) == 4


def test_domino_perimeter():
    s = GrowthState.single(2)
    add_tile(s, (1, 0))
    assert s.cells() == [(0, 0), (1, 0)]
    assert len(s.perimeter) == 6


def test_3d_two_cells_perimeter():
    s = GrowthState.single(3)
    s.add((0, 0, 1))
    assert len(s.perimeter) == 10


def test_add_tile_rejects_non_perimeter():
    s = GrowthState.single(2)
    with pytest.raises(LatticeError):
        s.add((2, 0))
    with pytest.raises(LatticeError):
        s.add((0, 0))


@given(polyominoes(dims=(2, 3, 4), max_cells=60))
def test_incremental_perimeter_matches_bruteforce(dp):
    d, cells = dp
    s = GrowthState.from_cells(cells)
    assert s.perimeter_cells() == brute_perimeter(cells)
    assert s.step == len(cells) == len(s.occupied)
    lo, hi = s.bbox()
    assert all(lo[j] <= c[j] <= hi[j] for c in cells for j in range(d))


def test_from_cells_rejects_disconnected():
    with pytest.raises(LatticeError):
        GrowthState.from_cells([(0, 0), (2, 0)])


def test_boundary_area_small():
    assert boundary_area(Polyomino.of([(0, 0)])) == 4
    assert boundary_area(Polyomino.of([(0, 0, 0)])) == 6
    assert boundary_area(Polyomino.of([(0, 0), (1, 0)])) == 6
    with pytest.raises(LatticeError):
        boundary_area(Polyomino(frozenset(), 2))


@given(polyominoes(dims=(2, 3, 4), max_cells=60))
def test_isoperimetric(dp):
    d, cells = dp
    n = len(cells)
    assert boundary_area(Polyomino.of(cells)) >= 2 * d * n ** ((d - 1) / d) - 1e-9


def test_isoperimetric_20_cells():
    cells = random_polyomino(random.Random(5), 2, 20)
    assert boundary_area(Polyomino.of(cells)) >= 18


def test_projection_volumes():
    assert projection_volumes(Polyomino.of([(0, 0), (0, 1), (1, 0)])) == [2, 2]
    assert projection_volumes(Polyomino.of([(0, 0, 0)])) == [1, 1, 1]


@given(polyominoes(dims=(2, 3, 4), max_cells=60))
def test_projection_lemma(dp):
    d, cells = dp
    assert max(projection_volumes(Polyomino.of(cells))) >= len(cells) ** ((d - 1) / d) - 1e-9


def test_projection_3d_30_cells():
    for seed in range(20):
        cells = random_polyomino(random.Random(seed), 3, 30)
        assert max(projection_volumes(Polyomino.of(cells))) >= 10


def test_shake_gap():
    p = Polyomino.of([(0, 0), (0, 2)])
    assert shake(p, 1).cells == {(0, 0), (0, 1)}


def test_shake_column_convex_input_only_translates():
    p = Polyomino.of([(0, 3), (0, 4), (1, 4), (1, 5)])
    out = shake(p, 1)
    assert out.cells == {(0, 3), (0, 4), (1, 3), (1, 4)}


@given(polyominoes(dims=(2, 3), max_cells=50))
def test_shake_properties(dp):
    d, cells = dp
    p = Polyomino.of(cells)
    before = projection_volumes(p)
    q = p
    for axis in range(d):
        q2 = shake(q, axis)
        assert len(q2) == len(q)
        assert all(a <= b for a, b in zip(projection_volumes(q2), projection_volumes(q)))
        q = q2
    assert all(is_column_convex(q, a) for a in range(d))
    assert all(a <= b for a, b in zip(projection_volumes(q), before))


@given(cell_sets(d=3, span=4))
def test_polyomino_text_roundtrip(cells):
    p = Polyomino.of(cells)
    text = p.to_text()
    assert text.splitlines()[1:] == [" ".join(map(str, c)) for c in sorted(cells)]
    assert Polyomino.from_text(text) == p


def test_parse_errors_carry_line_numbers():
    with pytest.raises(PolyominoParseError) as e:
        parse_polyomino(["2", "0 0", "1"])
    assert e.value.lineno == 3
    with pytest.raises(PolyominoParseError):
        parse_polyomino(["x"])
    with pytest.raises(PolyominoParseError):
        parse_polyomino(["R=5", "2"])
    p, flags = parse_polyomino(["R=5", "require_base=1", "2", "0 0"], allow_flags=True)
    assert flags == {"R": "5", "require_base": "1"} and len(p) == 1


def test_face_connected():
    assert is_face_connected([(0, 0), (0, 1)])
    assert not is_face_connected([(0, 0), (1, 1)])
