import json
import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_polyomino
from edentopo.growth import simulate
from edentopo.homology import barcode_key, betti, build_filtration, persistence
from edentopo.holetrack import (
    ComplementMap,
    HoleRecord,
    SplitTree,
    barcode_dminus1,
    canonical_fixed,
    canonical_free,
    cells_from_key,
    complement_components,
    fixed_multiplicity,
    hole_births,
    hole_mesh_obj,
    on_tile_added,
    perimeter_split_bruteforce,
)
from edentopo.lattice import GrowthState, Polyomino, neighbors_face

RING8 = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)]
# 5x3 frame around the row (1,1),(2,1),(3,1), closed by its last cell
FRAME = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (4, 1), (4, 2), (3, 2), (2, 2), (1, 2), (0, 2), (0, 1)]


def _tracker(cells):
    state = GrowthState.single(len(cells[0]))
    cm = ComplementMap(state.d)
    cm.start(state)
    events = []
    for c in cells[1:]:
        events.append(on_tile_added(cm, c))
    return cm, events


def test_ring_birth_and_death():
    cm, ev = _tracker(RING8 + [(1, 1)])
    assert ev[-2] == [("birth", 1)]
    assert ev[-1] == [("death", 1)]
    rec = cm.records[1]
    assert (rec.birth, rec.death, rec.volume_at_birth) == (8, 9, 1)


def test_ring_perimeter_split():
    cm, _ = _tracker(RING8)
    assert cm.perimeter_split() == (12, 1)
    assert perimeter_split_bruteforce(RING8) == (12, 1)


def test_single_cell_split():
    for d in (2, 3, 4):
        s = GrowthState.single(d)
        cm = ComplementMap(d)
        cm.start(s)
        assert cm.perimeter_split() == (2 * d, 0)


def test_u_shape_split_into_two():
    cm, ev = _tracker(FRAME + [(2, 1)])
    assert ev[-2] == [("birth", 1)]
    assert cm.records[1].volume_at_birth == 3
    assert [e for e, _ in ev[-1]] == ["split"]
    assert cm.n_holes == 2
    _, holes = complement_components(FRAME + [(2, 1)])
    assert sorted(sorted(h) for h in holes) == [[(1, 1)], [(3, 1)]]
    assert sorted(cm.hole_cells(h) for h in cm.alive()) == [[(1, 1)], [(3, 1)]]


def test_all_fragments_counted_as_creations():
    cm, _ = _tracker(FRAME + [(2, 1)])
    births = sorted((s, c) for s, c, _ in hole_births(cm.records.values()))
    assert births == [(12, ((1, 1), (2, 1), (3, 1))), (13, ((1, 1),)), (13, ((3, 1),))]


def test_barcode_without_split():
    tree = SplitTree({1: HoleRecord(1, 5, (), death=12)})
    assert barcode_key(barcode_dminus1(tree, 2)) == [(1, 5, 12)]


def test_barcode_elder_rule_on_tree():
    a = HoleRecord(1, 5, (), death=12, splits=[(9, [2])])
    b = HoleRecord(2, 9, (), parent=1, death=20)
    assert barcode_key(barcode_dminus1(SplitTree({1: a, 2: b}), 2)) == [(1, 5, 20), (1, 9, 12)]


def test_barcode_elder_rule_on_trajectory():
    # split at 13; the id keeper (1,1) dies at 14, the other fragment at 20
    pad = [(5, 0), (6, 0), (7, 0), (8, 0), (9, 0)]
    traj = FRAME + [(2, 1), (1, 1)] + pad + [(3, 1)]
    cm, _ = _tracker(traj)
    got = barcode_key(barcode_dminus1(cm.tree(), 2))
    assert got == [(1, 12, 20), (1, 13, 14)]
    ref = [iv for iv in persistence(build_filtration(traj)) if iv.hdim == 1]
    assert barcode_key(ref) == got


def test_fixed_keys():
    assert canonical_fixed([(3, 4)]) == canonical_fixed([(0, 0)])
    l_tromino = [(0, 0), (1, 0), (0, 1)]
    rotated = [(0, 0), (1, 0), (1, 1)]
    assert canonical_fixed(l_tromino) != canonical_fixed(rotated)
    assert canonical_free(l_tromino) == canonical_free(rotated)
    assert cells_from_key(canonical_fixed([(5, 5), (6, 5)])) == [(0, 0), (1, 0)]


def _fixed_animals(d, n):
    shapes = {canonical_fixed([(0,) * d])}
    for _ in range(n - 1):
        nxt = set()
        for key in shapes:
            cells = cells_from_key(key)
            cs = set(cells)
            for c in cells:
                for m in neighbors_face(c):
                    if m not in cs:
                        nxt.add(canonical_fixed(cells + [m]))
        shapes = nxt
    return shapes


# free counts identify mirror images, so the 3D chiral tetracube pair is one class
@pytest.mark.parametrize("d,n,fixed,free", [(2, 3, 6, 2), (2, 4, 19, 5), (2, 5, 63, 12), (3, 3, 15, 2), (3, 4, 86, 7)])
def test_animal_counts(d, n, fixed, free):
    shapes = _fixed_animals(d, n)
    assert len(shapes) == fixed
    frees = {canonical_free(cells_from_key(k)) for k in shapes}
    assert len(frees) == free
    assert sum(fixed_multiplicity(cells_from_key(f)) for f in frees) == fixed


def test_line_tromino_classes():
    shapes = _fixed_animals(2, 3)
    line = canonical_free([(0, 0), (1, 0), (2, 0)])
    assert sum(canonical_free(cells_from_key(k)) == line for k in shapes) == 2


@given(st.integers(2, 3), st.integers(1, 12), st.integers(0, 2 ** 32), st.data())
def test_free_key_group_invariance(d, n, seed, data):
    from edentopo.lattice import apply_symmetry, signed_permutations

    cells = random_polyomino(random.Random(seed), d, n)
    perms = list(signed_permutations(d))
    p, s = data.draw(st.sampled_from(perms))
    shift = data.draw(st.tuples(*[st.integers(-50, 50)] * d))
    moved = [tuple(x + y for x, y in zip(c, shift)) for c in apply_symmetry(cells, p, s)]
    assert canonical_free(moved) == canonical_free(cells)


def test_free_key_dimension_guard():
    with pytest.raises(ValueError):
        canonical_free([(0,) * 6])


@given(st.sampled_from([2, 3]), st.integers(2, 250), st.integers(0, 2 ** 40))
def test_tracker_matches_flood_fill(d, t, seed):
    cm = ComplementMap(d)
    snaps = set(random.Random(seed).sample(range(2, t + 1), min(t - 1, 5))) | {t}
    seen = []

    def check(state, ev):
        if ev.step in snaps:
            cells = state.cells()
            _, holes = complement_components(cells)
            seen.append(ev.step)
            assert cm.n_holes == len(holes) == betti(Polyomino.of(cells))[d - 1]
            assert sorted(sorted(cm.hole_cells(h)) for h in cm.alive()) == sorted(sorted(h) for h in holes)
            assert cm.perimeter_split(state) == perimeter_split_bruteforce(cells)
            out, inn = cm.perimeter_split(state)
            assert out + inn == len(state.perimeter)

    simulate(d, t, seed, hooks=[cm, check])
    assert seen


@given(st.integers(2, 300), st.integers(0, 2 ** 40))
def test_barcode_equivalence_2d(t, seed):
    cm = ComplementMap(2)
    tr = simulate(2, t, seed, hooks=[cm])
    ref = [iv for iv in persistence(build_filtration(tr)) if iv.hdim == 1]
    assert barcode_key(barcode_dminus1(cm.tree(), 2)) == barcode_key(ref)


def test_holes_shrink_monotonically():
    cm = ComplementMap(2)
    simulate(2, 20_000, 6, hooks=[cm])
    for r in cm.records.values():
        vols = [v for _, v in r.volume_history]
        assert vols == sorted(vols, reverse=True)
        if r.death is not None:
            assert r.death > r.birth
        for s, kids in r.splits:
            assert len(kids) >= 1
            assert all(cm.records[k].birth == s and cm.records[k].parent == r.id for k in kids)


def test_split_tree_json_roundtrip():
    cm, _ = _tracker(FRAME + [(2, 1), (1, 1)])
    text = cm.tree().to_json()
    data = json.loads(text)
    assert {n["id"] for n in data["nodes"]} == {1, 2}
    back = SplitTree.from_json(text)
    assert back.edges() == cm.tree().edges()
    assert barcode_key(barcode_dminus1(back, 2)) == barcode_key(barcode_dminus1(cm.tree(), 2))


def _obj_counts(text):
    lines = text.splitlines()
    v = [tuple(map(int, ln.split()[1:])) for ln in lines if ln.startswith("v ")]
    f = [list(map(int, ln.split()[1:])) for ln in lines if ln.startswith("f ")]
    return v, f


def test_obj_single_cube():
    v, f = _obj_counts(hole_mesh_obj([(0, 0, 0)]))
    assert len(v) == 8 and len(f) == 6
    edges = {frozenset((q[i], q[(i + 1) % 4])) for q in f for i in range(4)}
    assert len(v) - len(edges) + len(f) == 2


@given(st.integers(1, 25), st.integers(0, 2 ** 32))
def test_obj_closed_and_outward(n, seed):
    import numpy as np

    cells = random_polyomino(random.Random(seed), 3, n)
    v, f = _obj_counts(hole_mesh_obj(cells))
    cs = set(cells)
    exposed = sum(1 for c in cells for m in neighbors_face(c) if m not in cs)
    assert len(f) == exposed
    # closed and consistently oriented: every directed edge is matched by its reverse
    # (cubes meeting along an edge only make that edge appear twice)
    directed = Counter((q[i], q[(i + 1) % 4]) for q in f for i in range(4))
    assert all(directed[(b, a)] == k for (a, b), k in directed.items())
    # signed volume of the closed surface equals the cell count
    P = np.array(v, dtype=float)
    vol = 0.0
    for q in f:
        a, b, c, e = (P[i - 1] for i in q)
        vol += np.dot(a, np.cross(b, c)) + np.dot(a, np.cross(c, e))
    assert vol / 6 == pytest.approx(len(cells))


def test_obj_rejects_2d():
    with pytest.raises(ValueError):
        hole_mesh_obj([(0, 0)])
