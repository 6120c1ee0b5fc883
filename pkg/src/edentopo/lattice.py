"""Geometry of the cubical lattice Z^d.

Cells are unit d-cubes identified by the integer coordinates of their
minimal corner.  Public functions take and return plain tuples
(``CellCoord``); the hot paths inside :class:`GrowthState` work on packed
integer keys produced by :class:`Codec`, where each axis occupies a fixed
bit field and axis 0 is the most significant, so integer order on keys is
lexicographic order on coordinates.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

CellCoord = tuple[int, ...]

MIN_DIM = 2
MAX_DIM = 8
FIELD_BITS = 21


class LatticeError(ValueError):
    """A violated precondition on lattice input (bad cell, bad dimension)."""


class CoordinateOverflow(RuntimeError):
    """The cluster outgrew the packed coordinate range."""


def check_dim(d: int) -> int:
    if not isinstance(d, int) or not MIN_DIM <= d <= MAX_DIM:
        raise LatticeError(f"dimension must be an integer in [{MIN_DIM}, {MAX_DIM}], got {d!r}")
    return d


class Codec:
    """Packs d signed coordinates into one non-negative int."""

    def __init__(self, d: int, bits: int = FIELD_BITS):
        self.d = check_dim(d)
        self.bits = bits
        self.mask = (1 << bits) - 1
        self.bias = 1 << (bits - 1)
        # keep a one-cell guard band so neighbor arithmetic never wraps
        self.limit = self.bias - 2
        self.shifts = [bits * (d - 1 - j) for j in range(d)]
        self.strides = [1 << s for s in self.shifts]
        self.face_offsets = []
        for s in self.strides:
            self.face_offsets.extend((-s, s))
        self.origin = self.encode((0,) * d)

    def encode(self, cell: Sequence[int]) -> int:
        if len(cell) != self.d:
            raise LatticeError(f"expected {self.d} coordinates, got {len(cell)}")
        key = 0
        for x in cell:
            if not -self.limit <= x <= self.limit:
                raise CoordinateOverflow(f"coordinate {x} outside packed range ±{self.limit}")
            key = (key << self.bits) | (x + self.bias)
        return key

    def decode(self, key: int) -> CellCoord:
        m, b = self.mask, self.bias
        return tuple(((key >> s) & m) - b for s in self.shifts)

    def coord(self, key: int, axis: int) -> int:
        return ((key >> self.shifts[axis]) & self.mask) - self.bias


_CODECS: dict[int, Codec] = {}


def codec_for(d: int) -> Codec:
    c = _CODECS.get(d)
    if c is None:
        c = _CODECS[d] = Codec(d)
    return c


def neighbors_face(c: CellCoord) -> list[CellCoord]:
    """The 2d cells sharing a (d-1)-face with ``c``: axis ascending, minus before plus."""
    out = []
    for j in range(len(c)):
        for delta in (-1, 1):
            n = list(c)
            n[j] += delta
            out.append(tuple(n))
    return out


class IndexedSet:
    """Set with O(1) insert, delete, membership and uniform sampling.

    Deletion swaps the victim with the last slot of the dense array.
    """

    __slots__ = ("items", "index")

    def __init__(self, items: Iterable = ()):
        self.items: list = []
        self.index: dict = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.index:
            self.index[x] = len(self.items)
            self.items.append(x)

    def remove(self, x) -> None:
        i = self.index.pop(x)
        last = self.items.pop()
        if last != x:
            self.items[i] = last
            self.index[last] = i

    def __contains__(self, x) -> bool:
        return x in self.index

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator:
        return iter(self.items)


@dataclass(frozen=True)
class Polyomino:
    """An immutable finite set of d-cells."""

    cells: frozenset
    d: int

    def __post_init__(self):
        check_dim(self.d)
        for c in self.cells:
            if len(c) != self.d:
                raise LatticeError(f"cell {c} does not have {self.d} coordinates")

    @classmethod
    def of(cls, cells: Iterable[Sequence[int]], d: int | None = None) -> "Polyomino":
        cs = frozenset(tuple(int(x) for x in c) for c in cells)
        if d is None:
            if not cs:
                raise LatticeError("cannot infer dimension of an empty polyomino")
            d = len(next(iter(cs)))
        return cls(cs, d)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[CellCoord]:
        return iter(sorted(self.cells))

    def translate(self, v: Sequence[int]) -> "Polyomino":
        return Polyomino(frozenset(tuple(a + b for a, b in zip(c, v)) for c in self.cells), self.d)

    def to_text(self) -> str:
        lines = [str(self.d)]
        lines.extend(" ".join(map(str, c)) for c in sorted(self.cells))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Polyomino":
        return parse_polyomino(text.splitlines())[0]


class PolyominoParseError(LatticeError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_polyomino(lines: Sequence[str], allow_flags: bool = False) -> tuple[Polyomino, dict]:
    """Parse the polyomino text format.

    With ``allow_flags`` leading ``key=value`` lines are collected into the
    returned dict (the census pattern header).
    """
    flags: dict[str, str] = {}
    d = None
    cells = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if d is None:
            if "=" in line:
                if not allow_flags:
                    raise PolyominoParseError(lineno, f"unexpected header {line!r}")
                k, _, v = line.partition("=")
                flags[k.strip()] = v.strip()
                continue
            try:
                d = check_dim(int(line))
            except ValueError as e:
                raise PolyominoParseError(lineno, f"bad dimension line {line!r}: {e}") from None
            continue
        parts = line.split()
        if len(parts) != d:
            raise PolyominoParseError(lineno, f"expected {d} integers, got {len(parts)}")
        try:
            cells.append(tuple(int(p) for p in parts))
        except ValueError:
            raise PolyominoParseError(lineno, f"non-integer coordinate in {line!r}") from None
    if d is None:
        raise PolyominoParseError(len(lines) + 1, "missing dimension line")
    return Polyomino(frozenset(cells), d), flags


def site_perimeter(cells: Iterable[CellCoord]) -> set[CellCoord]:
    """Brute-force site perimeter: empty cells sharing a (d-1)-face with ``cells``."""
    occ = set(cells)
    out = set()
    for c in occ:
        for n in neighbors_face(c):
            if n not in occ:
                out.add(n)
    return out


def is_face_connected(cells: Iterable[CellCoord]) -> bool:
    cs = set(cells)
    if not cs:
        return True
    start = next(iter(cs))
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for n in neighbors_face(c):
            if n in cs and n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(cs)


class GrowthState:
    """Occupied cells, indexed site perimeter, bounding box and Eden time."""

    def __init__(self, d: int):
        self.codec = codec_for(d)
        self.d = d
        self.occupied: set[int] = set()
        self.perimeter = IndexedSet()
        self.step = 0
        self.lo = [0] * d
        self.hi = [0] * d
        self.last_new_perimeter: list[int] = []

    @classmethod
    def single(cls, d: int) -> "GrowthState":
        s = cls(d)
        s._seed(s.codec.origin)
        return s

    @classmethod
    def from_cells(cls, cells: Iterable[Sequence[int]], d: int | None = None) -> "GrowthState":
        """Build a state from a face-connected cell set (any addition order)."""
        p = Polyomino.of(cells, d)
        if not p.cells:
            raise LatticeError("empty cell set")
        if not is_face_connected(p.cells):
            raise LatticeError("cell set is not face-connected")
        s = cls(p.d)
        enc = s.codec.encode
        order = sorted(p.cells)
        # BFS order so every addition is a perimeter cell
        first = order[0]
        s._seed(enc(first))
        todo = set(p.cells) - {first}
        frontier = [first]
        while frontier:
            nxt = []
            for c in frontier:
                for n in neighbors_face(c):
                    if n in todo:
                        todo.discard(n)
                        s.add_key(enc(n))
                        nxt.append(n)
            frontier = nxt
        return s

    def _seed(self, key: int) -> None:
        if self.occupied:
            raise LatticeError("state already seeded")
        self.occupied.add(key)
        self.step = 1
        c = self.codec.decode(key)
        self.lo = list(c)
        self.hi = list(c)
        self.last_new_perimeter = [key + off for off in self.codec.face_offsets]
        for n in self.last_new_perimeter:
            self.perimeter.add(n)

    def add_key(self, key: int) -> None:
        perim = self.perimeter
        if key not in perim.index:
            raise LatticeError(f"cell {self.codec.decode(key)} is not in the site perimeter")
        perim.remove(key)
        occ = self.occupied
        occ.add(key)
        new = []
        for off in self.codec.face_offsets:
            n = key + off
            if n not in occ and n not in perim.index:
                perim.add(n)
                new.append(n)
        self.last_new_perimeter = new
        self.step += 1
        cod = self.codec
        m, b = cod.mask, cod.bias
        lo, hi = self.lo, self.hi
        for j, s in enumerate(cod.shifts):
            x = ((key >> s) & m) - b
            if x < lo[j]:
                lo[j] = x
                if x <= -cod.limit:
                    raise CoordinateOverflow("cluster reached the packed coordinate limit")
            elif x > hi[j]:
                hi[j] = x
                if x >= cod.limit:
                    raise CoordinateOverflow("cluster reached the packed coordinate limit")

    def add(self, c: CellCoord) -> None:
        self.add_key(self.codec.encode(c))

    def copy(self) -> "GrowthState":
        s = GrowthState(self.d)
        s.occupied = set(self.occupied)
        s.perimeter = IndexedSet()
        s.perimeter.items = list(self.perimeter.items)
        s.perimeter.index = dict(self.perimeter.index)
        s.step = self.step
        s.lo, s.hi = list(self.lo), list(self.hi)
        s.last_new_perimeter = list(self.last_new_perimeter)
        return s

    def __len__(self) -> int:
        return len(self.occupied)

    def cells(self) -> list[CellCoord]:
        dec = self.codec.decode
        return sorted(dec(k) for k in self.occupied)

    def perimeter_cells(self) -> set[CellCoord]:
        dec = self.codec.decode
        return {dec(k) for k in self.perimeter}

    def polyomino(self) -> Polyomino:
        dec = self.codec.decode
        return Polyomino(frozenset(dec(k) for k in self.occupied), self.d)

    def bbox(self) -> tuple[CellCoord, CellCoord]:
        return tuple(self.lo), tuple(self.hi)


def add_tile(state: GrowthState, c: CellCoord) -> GrowthState:
    state.add(c)
    return state


def _require_nonempty(p: Polyomino) -> None:
    if not p.cells:
        raise LatticeError("polyomino is empty")


def boundary_area(p: Polyomino) -> int:
    """Number of (d-1)-faces with exactly one incident occupied cell."""
    _require_nonempty(p)
    cs = p.cells
    return sum(1 for c in cs for n in neighbors_face(c) if n not in cs)


def projection_volumes(p: Polyomino) -> list[int]:
    """Entry i: number of distinct (d-1)-cells in the projection along axis i."""
    _require_nonempty(p)
    return [len({c[:i] + c[i + 1:] for c in p.cells}) for i in range(p.d)]


def shake(p: Polyomino, axis: int) -> Polyomino:
    """Let every column along ``axis`` fall onto the polyomino's lowest hyperplane."""
    if not 0 <= axis < p.d:
        raise LatticeError(f"axis {axis} out of range for d={p.d}")
    if not p.cells:
        return p
    base = min(c[axis] for c in p.cells)
    heights: dict[CellCoord, int] = defaultdict(int)
    for c in p.cells:
        heights[c[:axis] + c[axis + 1:]] += 1
    out = set()
    for rest, h in heights.items():
        for z in range(base, base + h):
            out.add(rest[:axis] + (z,) + rest[axis:])
    return Polyomino(frozenset(out), p.d)


def is_column_convex(p: Polyomino, axis: int) -> bool:
    cols: dict[CellCoord, list[int]] = defaultdict(list)
    for c in p.cells:
        cols[c[:axis] + c[axis + 1:]].append(c[axis])
    return all(max(zs) - min(zs) + 1 == len(zs) for zs in cols.values())


def signed_permutations(d: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All 2^d d! elements of the hyperoctahedral group as (perm, signs)."""
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1), repeat=d):
            yield perm, signs


def apply_symmetry(cells: Iterable[CellCoord], perm: Sequence[int], signs: Sequence[int]) -> list[CellCoord]:
    """Image of a cell set under a signed axis permutation.

    Cell ``c`` covers [c, c+1] on each axis, so a reflection maps it to
    ``-c-1``.
    """
    out = []
    for c in cells:
        out.append(tuple(c[pj] if s > 0 else -c[pj] - 1 for pj, s in zip(perm, signs)))
    return out


def normalize(cells: Iterable[CellCoord]) -> tuple[CellCoord, ...]:
    """Translate so the minimal corner sits at the origin; sorted tuple."""
    cs = list(cells)
    if not cs:
        return ()
    d = len(cs[0])
    mins = [min(c[j] for c in cs) for j in range(d)]
    return tuple(sorted(tuple(x - m for x, m in zip(c, mins)) for c in cs))
