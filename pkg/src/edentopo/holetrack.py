"""Bounded complement components (top-dimensional holes) under growth.

By Alexander duality beta_{d-1} of the cluster equals the number of
bounded face-connected components of the unoccupied cells.  Holes are
kept explicitly (cell -> hole id); every other unoccupied cell belongs to
the unbounded component.  An unoccupied cell is certified unbounded when
some axis-parallel ray from it misses the cluster, which is checked in
O(d) from the per-line extents of the occupied set.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .growth import EVENT_NAMES, GrowthEvent, Trajectory
from .homology import PersistenceInterval, euler_characteristic
from .lattice import (
    CellCoord,
    GrowthState,
    IndexedSet,
    LatticeError,
    Polyomino,
    apply_symmetry,
    codec_for,
    neighbors_face,
    normalize,
    signed_permutations,
)

OUTER = 0
MAX_FREE_DIM = 5


@dataclass
class HoleRecord:
    """One hole identity.  At a split the largest fragment keeps the id."""

    id: int
    birth: int
    cells: tuple[CellCoord, ...]
    parent: int | None = None
    death: int | None = None
    splits: list[tuple[int, list[int]]] = field(default_factory=list)
    volume_history: list[tuple[int, int]] = field(default_factory=list)
    shape_fixed: str = ""
    shape_free: str = ""
    final_cells: tuple[CellCoord, ...] = ()
    # cells of the fragment that kept this id, per split step
    kept: list[tuple[int, tuple[CellCoord, ...]]] = field(default_factory=list)

    @property
    def volume_at_birth(self) -> int:
        return len(self.cells)

    def volume_at(self, t: int) -> int:
        """Volume after step ``t`` (0 if not alive then)."""
        if t < self.birth or (self.death is not None and t >= self.death):
            return 0
        v = 0
        for s, vol in self.volume_history:
            if s > t:
                break
            v = vol
        return v

    @property
    def children(self) -> list[int]:
        return [c for _, cs in self.splits for c in cs]


@dataclass
class SplitTree:
    nodes: dict[int, HoleRecord]

    @property
    def roots(self) -> list[int]:
        return [i for i, r in self.nodes.items() if r.parent is None]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(r.id, c, s) for r in self.nodes.values() for s, cs in r.splits for c in cs]

    def to_json(self) -> str:
        nodes = [
            {"id": r.id, "birth": r.birth, "death": r.death, "children": r.children}
            for r in sorted(self.nodes.values(), key=lambda r: r.id)
        ]
        return json.dumps({"nodes": nodes}, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SplitTree":
        """Rebuild topology-only records (no cells or shapes)."""
        data = json.loads(text)
        nodes = {}
        for n in data["nodes"]:
            nodes[n["id"]] = HoleRecord(id=n["id"], birth=n["birth"], cells=(), death=n["death"])
        for n in data["nodes"]:
            for c in n["children"]:
                child = nodes[c]
                child.parent = n["id"]
                rec = nodes[n["id"]]
                if rec.splits and rec.splits[-1][0] == child.birth:
                    rec.splits[-1][1].append(c)
                else:
                    rec.splits.append((child.birth, [c]))
        return cls(nodes)


# --- shape keys ---------------------------------------------------------

def _key_str(cells: Sequence[CellCoord]) -> str:
    return ";".join(",".join(map(str, c)) for c in cells)


def canonical_fixed(cells: Iterable[CellCoord]) -> str:
    """Translation class key: cells shifted to the origin, sorted."""
    norm = normalize(cells)
    if not norm:
        raise ValueError("empty cell set")
    return _key_str(norm)


def _free_form(cells: Sequence[CellCoord]) -> tuple[CellCoord, ...]:
    d = len(cells[0])
    if d > MAX_FREE_DIM:
        raise ValueError(f"free canonical form supported for d <= {MAX_FREE_DIM}, got {d}")
    return min(normalize(apply_symmetry(cells, p, s)) for p, s in signed_permutations(d))


def canonical_free(cells: Iterable[CellCoord]) -> str:
    """Key of the class under translations and all signed axis permutations."""
    cs = list(cells)
    if not cs:
        raise ValueError("empty cell set")
    return _key_str(_free_form(cs))


def fixed_multiplicity(cells: Iterable[CellCoord]) -> int:
    """Number of distinct fixed shapes in the free class of ``cells``."""
    cs = list(cells)
    d = len(cs[0])
    return len({normalize(apply_symmetry(cs, p, s)) for p, s in signed_permutations(d)})


def cells_from_key(key: str) -> list[CellCoord]:
    if not key:
        return []
    return [tuple(int(x) for x in part.split(",")) for part in key.split(";")]


# --- brute force oracle -------------------------------------------------

def complement_components(cells: Iterable[CellCoord]) -> tuple[set[CellCoord], list[set[CellCoord]]]:
    """Face-connected components of the empty cells in the bbox plus a 1-cell margin.

    Returns (outer component restricted to the box, list of bounded components).
    """
    occ = set(cells)
    if not occ:
        raise ValueError("empty cell set")
    d = len(next(iter(occ)))
    lo = [min(c[j] for c in occ) - 1 for j in range(d)]
    hi = [max(c[j] for c in occ) + 1 for j in range(d)]
    seen: set[CellCoord] = set()
    outer: set[CellCoord] | None = None
    holes = []
    for c in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if c in occ or c in seen:
            continue
        comp = {c}
        stack = [c]
        touches = False
        while stack:
            x = stack.pop()
            if any(x[j] == lo[j] or x[j] == hi[j] for j in range(d)):
                touches = True
            for n in neighbors_face(x):
                if n in comp or n in occ:
                    continue
                if all(lo[j] <= n[j] <= hi[j] for j in range(d)):
                    comp.add(n)
                    stack.append(n)
        seen |= comp
        if touches:
            outer = comp if outer is None else outer | comp
        else:
            holes.append(comp)
    return outer or set(), holes


# --- local window tables ------------------------------------------------

class _Window:
    """Precomputed 3^d neighborhood tables for one dimension."""

    def __init__(self, d: int):
        cod = codec_for(d)
        self.d = d
        offs = [e for e in itertools.product((-1, 0, 1), repeat=d) if any(e)]
        self.offsets = offs
        pos = {e: i for i, e in enumerate(offs)}
        self.deltas = [sum(x * s for x, s in zip(e, cod.strides)) for e in offs]
        self.face_pos = []
        for j in range(d):
            for s in (-1, 1):
                e = [0] * d
                e[j] = s
                self.face_pos.append(pos[tuple(e)])
        self.adj = []
        for e in offs:
            nb = []
            for j in range(d):
                for s in (-1, 1):
                    f = list(e)
                    f[j] += s
                    f = tuple(f)
                    if f in pos:
                        nb.append(pos[f])
            self.adj.append(nb)
        # faces of the centre cube: (cubes that share it, parity of its dimension)
        self.face_masks = []
        for e in itertools.product((-1, 0, 1), repeat=d):
            choices = [(0, x) if x else (0,) for x in e]
            m = 0
            for s in itertools.product(*choices):
                if any(s):
                    m |= 1 << pos[s]
            dim = sum(1 for x in e if x == 0)
            self.face_masks.append((m, -1 if dim % 2 else 1))
        self._cache: dict[int, tuple[int, tuple[tuple[int, ...], ...]]] = {}

    def analyze(self, mask: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
        """For an occupancy mask of the window: (Euler change from adding the
        centre, face-neighbor directions grouped by local connectivity)."""
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        dchi = 0
        for fm, sign in self.face_masks:
            if not mask & fm:
                dchi += sign
        label = {}
        groups = []
        for dirn, p in enumerate(self.face_pos):
            if mask >> p & 1 or p in label:
                continue
            g = len(groups)
            label[p] = g
            stack = [p]
            while stack:
                q = stack.pop()
                for r in self.adj[q]:
                    if r not in label and not mask >> r & 1:
                        label[r] = g
                        stack.append(r)
            groups.append([])
        for dirn, p in enumerate(self.face_pos):
            if not mask >> p & 1:
                groups[label[p]].append(dirn)
        res = (dchi, tuple(tuple(g) for g in groups))
        if len(self._cache) > 2_000_000:
            self._cache.clear()
        self._cache[mask] = res
        return res


_WINDOWS: dict[int, _Window] = {}


def window_for(d: int) -> _Window:
    w = _WINDOWS.get(d)
    if w is None:
        w = _WINDOWS[d] = _Window(d)
    return w


# --- the tracker --------------------------------------------------------

class ComplementMap:
    """Incremental hole tracker; usable as a ``simulate`` hook.

    Per step it reports the change of beta_{d-1}; for d <= 3 it also
    reports the change of beta_1 through the Euler characteristic
    (beta_0 = 1 and beta_d = 0 leave one unknown).
    """

    def __init__(self, d: int, shapes: bool = True, euler: bool = True):
        self.d = d
        self.codec = codec_for(d)
        self.win = window_for(d)
        self.shapes = shapes
        self.euler = euler and d <= 3
        self.hole_of: dict[int, int] = {}
        self.members: dict[int, set[int]] = {}
        self.records: dict[int, HoleRecord] = {}
        self.next_id = 1
        self.inner = 0
        self.chi = 0
        self.state: GrowthState | None = None
        cod = self.codec
        full = (1 << (cod.bits * d)) - 1
        self._line_masks = [full ^ (cod.mask << s) for s in cod.shifts]
        self._ext: list[dict[int, list[int]]] = [{} for _ in range(d)]
        self._free_cache: dict[tuple, str] = {}

    # -- setup
    def start(self, state: GrowthState) -> None:
        if state.d != self.d:
            raise LatticeError("dimension mismatch")
        self.state = state
        for key in state.occupied:
            self._extend(key)
        cells = state.cells()
        self.chi = euler_characteristic(Polyomino(frozenset(cells), self.d))
        if len(cells) > 1:
            _, holes = complement_components(cells)
            enc = self.codec.encode
            for h in sorted(holes, key=min):
                self._new_hole({enc(c) for c in h}, state.step, None)
        perim = state.perimeter.index
        self.inner = sum(1 for k in self.hole_of if k in perim)

    def _extend(self, key: int) -> None:
        cod = self.codec
        m = cod.mask
        for a, s in enumerate(cod.shifts):
            line = key & self._line_masks[a]
            v = (key >> s) & m
            e = self._ext[a].get(line)
            if e is None:
                self._ext[a][line] = [v, v]
            elif v < e[0]:
                e[0] = v
            elif v > e[1]:
                e[1] = v

    def exposed(self, key: int) -> bool:
        """True if an axis-parallel ray from this empty cell misses the cluster."""
        cod = self.codec
        m = cod.mask
        for a, s in enumerate(cod.shifts):
            e = self._ext[a].get(key & self._line_masks[a])
            if e is None:
                return True
            v = (key >> s) & m
            if v < e[0] or v > e[1]:
                return True
        return False

    # -- queries
    @property
    def n_holes(self) -> int:
        return len(self.members)

    def label(self, c: CellCoord) -> int | None:
        """Hole id, ``OUTER`` for the unbounded component, None if occupied."""
        key = self.codec.encode(c)
        if self.state is not None and key in self.state.occupied:
            return None
        return self.hole_of.get(key, OUTER)

    def perimeter_split(self, state: GrowthState | None = None) -> tuple[int, int]:
        state = state or self.state
        p = len(state.perimeter)
        return p - self.inner, self.inner

    def hole_cells(self, hid: int) -> list[CellCoord]:
        dec = self.codec.decode
        return sorted(dec(k) for k in self.members[hid])

    def alive(self) -> list[int]:
        return sorted(self.members)

    def tree(self) -> SplitTree:
        return SplitTree(self.records)

    def finalize(self) -> None:
        """Store the current cells of every live hole on its record."""
        dec = self.codec.decode
        for hid, keys in self.members.items():
            self.records[hid].final_cells = tuple(sorted(dec(k) for k in keys))

    # -- updates
    def _new_hole(self, keys: set[int], step: int, parent: int | None) -> int:
        hid = self.next_id
        self.next_id += 1
        dec = self.codec.decode
        cells = tuple(sorted(dec(k) for k in keys))
        rec = HoleRecord(id=hid, birth=step, cells=cells, parent=parent)
        rec.volume_history.append((step, len(keys)))
        if self.shapes:
            norm = normalize(cells)
            rec.shape_fixed = _key_str(norm)
            if self.d <= MAX_FREE_DIM:
                free = self._free_cache.get(norm)
                if free is None:
                    free = _key_str(_free_form(norm))
                    if len(norm) <= 12:
                        self._free_cache[norm] = free
                rec.shape_free = free
        self.records[hid] = rec
        self.members[hid] = keys
        for k in keys:
            self.hole_of[k] = hid
        return hid

    def __call__(self, state: GrowthState, ev: GrowthEvent) -> None:
        kind, dtop, dchi = self.on_tile_added(ev.key, ev.step)
        db = ev.topo.setdefault("db", {})
        db[self.d - 1] = dtop
        if self.euler:
            if self.d == 3:
                db[1] = dtop - dchi
            elif -dchi != dtop:
                raise AssertionError(f"Euler/duality mismatch at step {ev.step}: {-dchi} vs {dtop}")
        ev.topo["hole_event"] = kind

    def on_tile_added(self, key: int, step: int) -> tuple[str, int, int]:
        """Update after ``key`` became occupied.

        Returns (event name, change of beta_{d-1}, change of Euler characteristic).
        """
        state = self.state
        occ = state.occupied
        self._extend(key)
        win = self.win
        mask = 0
        bit = 1
        for dl in win.deltas:
            if key + dl in occ:
                mask |= bit
            bit <<= 1
        dchi, groups = win.analyze(mask)
        self.chi += dchi
        offs = self.codec.face_offsets

        hid = self.hole_of.pop(key, None)
        if hid is None:
            kind, delta, born = self._outer_added(key, step, groups, offs)
        else:
            self.inner -= 1
            kind, delta = self._hole_shrunk(hid, key, step, groups, offs)
            born = ()
        perim = state.perimeter.index
        hole_of = self.hole_of
        for n in state.last_new_perimeter:
            h = hole_of.get(n)
            if h is not None and h not in born:
                self.inner += 1
        for h in born:
            self.inner += sum(1 for k in self.members[h] if k in perim)
        return kind, delta, dchi

    def _outer_added(self, key, step, groups, offs):
        if len(groups) <= 1:
            return "none", 0, ()
        exposed = self.exposed
        seeds = [[key + offs[i] for i in g] for g in groups]
        pending = [g for g in seeds if not any(exposed(k) for k in g)]
        if not pending:
            return "none", 0, ()
        n_outer_seeds = len(seeds) - len(pending)
        enclosed = self._race(pending, [k for g in seeds if g not in pending for k in g], n_outer_seeds > 0)
        born = tuple(self._new_hole(set(cells), step, None) for cells in enclosed)
        if born:
            return "birth", len(born), born
        return "none", 0, ()

    def _race(self, groups: list[list[int]], outer_cells: list[int], outer_known: bool) -> list[list[int]]:
        """Interleaved BFS from each group until every group is either
        enclosed (search exhausted) or joined to the unbounded component."""
        occ = self.state.occupied
        offs = self.codec.face_offsets
        exposed = self.exposed
        n = len(groups)
        OUT = n
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        owner: dict[int, int] = {}
        for c in outer_cells:
            owner[c] = OUT
        frontier = []
        cells = []
        for gi, g in enumerate(groups):
            for c in g:
                owner[c] = gi
            frontier.append(deque(g))
            cells.append(list(g))
        active = list(range(n))
        enclosed = []
        while active:
            if not outer_known and len(active) == 1:
                break
            for gi in list(active):
                if gi not in active:
                    continue
                fr = frontier[gi]
                if not fr:
                    enclosed.append(cells[gi])
                    active.remove(gi)
                    continue
                x = fr.popleft()
                for off in offs:
                    y = x + off
                    if y in occ:
                        continue
                    o = owner.get(y)
                    if o is None:
                        owner[y] = gi
                        cells[gi].append(y)
                        fr.append(y)
                        if exposed(y):
                            parent[gi] = OUT
                            outer_known = True
                            active.remove(gi)
                            break
                        continue
                    r = find(o)
                    if r == gi:
                        continue
                    if r == OUT:
                        parent[gi] = OUT
                        active.remove(gi)
                        break
                    # two searches met: merge r into gi
                    parent[r] = gi
                    fr.extend(frontier[r])
                    frontier[r] = deque()
                    cells[gi].extend(cells[r])
                    cells[r] = []
                    active.remove(r)
        return enclosed

    def _hole_shrunk(self, hid, key, step, groups, offs):
        members = self.members[hid]
        members.discard(key)
        rec = self.records[hid]
        if not members:
            del self.members[hid]
            rec.death = step
            rec.volume_history.append((step, 0))
            return "death", -1
        if len(groups) <= 1:
            rec.volume_history.append((step, len(members)))
            return "none", 0
        comps = []
        seen = set()
        for g in groups:
            start = key + offs[g[0]]
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for off in offs:
                    y = x + off
                    if y in members and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(comp)
        if len(comps) == 1:
            rec.volume_history.append((step, len(members)))
            return "none", 0
        dec = self.codec.decode
        comps.sort(key=lambda c: (-len(c), min(dec(k) for k in c)))
        keep = comps[0]
        self.members[hid] = keep
        rec.volume_history.append((step, len(keep)))
        rec.kept.append((step, tuple(sorted(dec(k) for k in keep))))
        kids = [self._new_hole(c, step, hid) for c in comps[1:]]
        rec.splits.append((step, kids))
        return "split", len(comps) - 1


def hole_births(records: Iterable[HoleRecord]) -> Iterator[tuple[int, tuple[CellCoord, ...], str]]:
    """(step, cells, free shape key) for every hole creation.

    A split counts as the creation of all of its fragments, the one that
    keeps the parent's id included; the parent's own creation was counted
    earlier.  Free keys are "" when shapes were not tracked and the
    fragment was not stored with one.
    """
    for r in records:
        yield r.birth, r.cells, r.shape_free
        for step, cells in r.kept:
            yield step, cells, ""


def on_tile_added(cm: ComplementMap, c: CellCoord) -> list[tuple[str, int]]:
    """Occupy ``c`` in the tracker's state and return its hole events."""
    state = cm.state
    key = cm.codec.encode(c)
    before = set(cm.members)
    state.add_key(key)
    kind, _, _ = cm.on_tile_added(key, state.step)
    if kind == "none":
        return []
    if kind == "birth":
        return [("birth", h) for h in sorted(set(cm.members) - before)]
    if kind == "death":
        return [("death", h) for h in sorted(before - set(cm.members))]
    rec_kids = [h for h in sorted(set(cm.members) - before)]
    return [("split", h) for h in rec_kids]


def perimeter_split(state: GrowthState, cm: ComplementMap) -> tuple[int, int]:
    return cm.perimeter_split(state)


def perimeter_split_bruteforce(cells: Iterable[CellCoord]) -> tuple[int, int]:
    cs = set(cells)
    from .lattice import site_perimeter

    perim = site_perimeter(cs)
    _, holes = complement_components(cs)
    inner_cells = set().union(*holes) if holes else set()
    inn = len(perim & inner_cells)
    return len(perim) - inn, inn


# --- barcode from the split tree ----------------------------------------

def barcode_dminus1(tree: SplitTree, d: int) -> list[PersistenceInterval]:
    """H_{d-1} barcode by the elder rule on the splitting tree.

    Each fragment's value is the last death among its descendants; at a
    split the fragment with the largest value carries the incoming
    interval and every other fragment opens a new one at the split step.
    """
    nodes = tree.nodes
    memo: dict[int, float] = {}

    def own_death(r: HoleRecord) -> float:
        return math.inf if r.death is None else r.death

    def f(hid: int) -> float:
        # iterative post-order to stay clear of recursion limits
        stack = [(hid, False)]
        while stack:
            h, done = stack.pop()
            if h in memo:
                continue
            r = nodes[h]
            kids = r.children
            if done or not kids:
                v = own_death(r)
                for c in kids:
                    v = max(v, memo[c])
                memo[h] = v
            else:
                stack.append((h, True))
                stack.extend((c, False) for c in kids if c not in memo)
        return memo[hid]

    out = []

    def as_death(v: float) -> int | None:
        return None if v == math.inf else int(v)

    for r in nodes.values():
        if r.parent is None:
            out.append(PersistenceInterval(d - 1, r.birth, as_death(f(r.id))))
        cont = own_death(r)
        # walk splits backwards so ``cont`` is the continuation's value
        for s, kids in reversed(r.splits):
            vals = [cont] + [f(c) for c in kids]
            top = max(vals)
            vals.remove(top)
            for v in vals:
                out.append(PersistenceInterval(d - 1, s, as_death(v)))
            cont = top
    return out


# --- mesh export --------------------------------------------------------

def hole_mesh_obj(cells: Iterable[CellCoord]) -> str:
    """Boundary quads of a 3D cell set as Wavefront OBJ text.

    Faces are oriented with outward normals (away from the cell set).
    """
    cs = set(cells)
    if not cs:
        raise ValueError("empty cell set")
    if len(next(iter(cs))) != 3:
        raise ValueError("mesh export needs 3D cells")
    verts: dict[tuple[int, int, int], int] = {}
    faces = []

    def vid(v):
        i = verts.get(v)
        if i is None:
            i = verts[v] = len(verts) + 1
        return i

    for c in sorted(cs):
        x, y, z = c
        for axis in range(3):
            for side in (0, 1):
                n = list(c)
                n[axis] += 1 if side else -1
                if tuple(n) in cs:
                    continue
                u, w = [a for a in range(3) if a != axis]
                base = list(c)
                base[axis] += side
                quad = []
                for du, dw in ((0, 0), (1, 0), (1, 1), (0, 1)):
                    v = list(base)
                    v[u] += du
                    v[w] += dw
                    quad.append(tuple(v))
                # (u, w, axis) is a right-handed frame iff axis == 1 flips it
                outward = (side == 1) != (axis == 1)
                if not outward:
                    quad.reverse()
                faces.append([vid(v) for v in quad])
    lines = [f"v {v[0]} {v[1]} {v[2]}" for v in verts]
    lines += ["f " + " ".join(map(str, f)) for f in faces]
    return "\n".join(lines) + "\n"


# --- reverse process ----------------------------------------------------

class ReverseProcess:
    """Removes cells of a hole one at a time, tracking its components."""

    def __init__(self, hole: Polyomino):
        self.d = hole.d
        self.codec = codec_for(hole.d)
        enc = self.codec.encode
        self.start = hole
        self.remaining: set[int] = {enc(c) for c in hole.cells}
        offs = self.codec.face_offsets
        self.exposed = IndexedSet(
            k for k in sorted(self.remaining) if any(k + o not in self.remaining for o in offs)
        )
        # treat everything outside the hole as occupied
        self.cm = ComplementMap(self.d, shapes=True, euler=False)
        self.step = 0
        self.removed: list[int] = []
        self.events = bytearray()
        comps = []
        left = set(self.remaining)
        while left:
            s = min(left)
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for o in offs:
                    y = x + o
                    if y in left and y not in comp:
                        comp.add(y)
                        stack.append(y)
            left -= comp
            comps.append(comp)
        for comp in comps:
            self.cm._new_hole(comp, 0, None)

    def remove(self, c: CellCoord) -> str:
        return self.remove_key(self.codec.encode(c))

    def remove_key(self, key: int) -> str:
        if key not in self.exposed:
            raise LatticeError(f"cell {self.codec.decode(key)} is not removable")
        self.step += 1
        self.exposed.remove(key)
        self.remaining.discard(key)
        cm = self.cm
        hid = cm.hole_of.pop(key)
        offs = self.codec.face_offsets
        win = cm.win
        rem = self.remaining
        mask = 0
        bit = 1
        for dl in win.deltas:
            if key + dl not in rem:
                mask |= bit
            bit <<= 1
        _, groups = win.analyze(mask)
        kind, _ = cm._hole_shrunk(hid, key, self.step, groups, offs)
        for o in offs:
            n = key + o
            if n in rem and n not in self.exposed:
                self.exposed.add(n)
        self.removed.append(key)
        self.events.append(EVENT_NAMES.index(kind))
        return kind

    def trajectory(self, seed: int) -> Trajectory:
        tr = Trajectory(seed=seed, mode=None, d=self.d, tiles=list(self.removed),
                        hole_events=bytearray(self.events), kind="reverse", start=self.start)
        tr.extra["split_tree"] = self.cm.tree()
        return tr
