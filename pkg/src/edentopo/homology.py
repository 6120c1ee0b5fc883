"""Mod-2 cubical homology of polyominoes and persistence of the growth filtration.

Cells of the cubical complex use doubled coordinates: an even entry 2k is
the point {k}, an odd entry 2k+1 the interval [k, k+1].  The occupied
cube with minimal corner c is therefore the cell 2c+1, and its closure is
every cell with entries in {2c, 2c+1, 2c+2}.

``betti`` is a plain rank computation and serves as the oracle; the
filtration and reduction code below is the fast path.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import CellCoord, Polyomino, check_dim

_BITS = 23
_MASK = (1 << _BITS) - 1
_BIAS = 1 << (_BITS - 1)


@dataclass(frozen=True)
class CubicalCell:
    coords: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def dim(self) -> int:
        return sum(x & 1 for x in self.coords)

    def boundary(self) -> list["CubicalCell"]:
        out = []
        for j, x in enumerate(self.coords):
            if x & 1:
                for y in (x - 1, x + 1):
                    out.append(CubicalCell(self.coords[:j] + (y,) + self.coords[j + 1:]))
        return out

    @classmethod
    def of_cube(cls, c: CellCoord) -> "CubicalCell":
        return cls(tuple(2 * x + 1 for x in c))

    def closure(self) -> list["CubicalCell"]:
        """The cell and all of its faces."""
        choices = [(x - 1, x, x + 1) if x & 1 else (x,) for x in self.coords]
        return [CubicalCell(t) for t in itertools.product(*choices)]


@dataclass
class PersistenceInterval:
    """Half-open [birth, death); ``death is None`` means the class never dies."""

    hdim: int
    birth: int
    death: int | None = None

    def __post_init__(self):
        if self.death is not None and self.death <= self.birth:
            raise ValueError(f"empty interval [{self.birth}, {self.death})")

    def as_tuple(self) -> tuple[int, int, int | None]:
        return (self.hdim, self.birth, self.death)

    def contains(self, t: int) -> bool:
        return self.birth <= t and (self.death is None or t < self.death)


def barcode_key(intervals: Iterable[PersistenceInterval]) -> list[tuple]:
    """Sorted tuples, for multiset comparison (open deaths sort last)."""
    return sorted((i.hdim, i.birth, -1 if i.death is None else i.death) for i in intervals)


# --- oracle -------------------------------------------------------------

def _cells_by_dim(cubes: Iterable[CellCoord], d: int) -> list[set[tuple[int, ...]]]:
    by_dim: list[set] = [set() for _ in range(d + 1)]
    for c in cubes:
        for t in itertools.product(*((2 * x, 2 * x + 1, 2 * x + 2) for x in c)):
            by_dim[sum(v & 1 for v in t)].add(t)
    return by_dim


def _rank_f2(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for v in rows:
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                r += 1
                break
            v ^= p
    return r


def _boundary_rank(hi: set, lo: set) -> int:
    index = {c: i for i, c in enumerate(sorted(lo))}
    rows = []
    for c in hi:
        v = 0
        for j, x in enumerate(c):
            if x & 1:
                v ^= 1 << index[c[:j] + (x - 1,) + c[j + 1:]]
                v ^= 1 << index[c[:j] + (x + 1,) + c[j + 1:]]
        rows.append(v)
    return _rank_f2(rows)


def cell_counts(p: Polyomino) -> list[int]:
    return [len(s) for s in _cells_by_dim(p.cells, p.d)]


def euler_characteristic(p: Polyomino) -> int:
    return sum((-1) ** k * n for k, n in enumerate(cell_counts(p)))


def betti(p: Polyomino) -> list[int]:
    """[beta_0, ..., beta_{d-1}] over F2 from ranks of the boundary maps."""
    d = check_dim(p.d)
    if not p.cells:
        return [0] * d
    by_dim = _cells_by_dim(p.cells, d)
    ranks = [0] * (d + 2)
    for k in range(1, d + 1):
        ranks[k] = _boundary_rank(by_dim[k], by_dim[k - 1])
    return [len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(d)]


# --- filtration ---------------------------------------------------------

def _pack(t: Sequence[int]) -> int:
    key = 0
    for x in t:
        key = (key << _BITS) | (x + _BIAS)
    return key


def _unpack(key: int, d: int) -> tuple[int, ...]:
    return tuple(((key >> (_BITS * (d - 1 - j))) & _MASK) - _BIAS for j in range(d))


class FilteredComplex:
    """Cells of the growth filtration sorted by (birth, dim, coordinates)."""

    def __init__(self, d: int, keys: list[int], births: list[int], dims: list[int]):
        self.d = d
        self.keys = keys
        self.births = births
        self.dims = dims
        self.index = {k: i for i, k in enumerate(keys)}
        self._strides = [1 << (_BITS * (d - 1 - j)) for j in range(d)]
        self._shifts = [_BITS * (d - 1 - j) for j in range(d)]

    def __len__(self) -> int:
        return len(self.keys)

    def cell(self, i: int) -> CubicalCell:
        return CubicalCell(_unpack(self.keys[i], self.d))

    def cells(self) -> list[tuple[CubicalCell, int]]:
        return [(self.cell(i), self.births[i]) for i in range(len(self.keys))]

    def boundary_indices(self, i: int) -> list[int]:
        key = self.keys[i]
        index = self.index
        out = []
        for s, st in zip(self._shifts, self._strides):
            if (key >> s) & 1:
                out.append(index[key - st])
                out.append(index[key + st])
        return out

    def count_by_dim(self) -> list[int]:
        out = [0] * (self.d + 1)
        for k in self.dims:
            out[k] += 1
        return out


def build_filtration(source, d: int | None = None) -> FilteredComplex:
    """Filtration of a growth trajectory (or a sequence of cubes in
    addition order): each cell is born with the first cube containing it."""
    from .growth import Trajectory

    if isinstance(source, Trajectory):
        if source.kind != "growth":
            raise ValueError("filtration needs a growth trajectory")
        d = source.d
        cubes = source.cells()
    else:
        cubes = [tuple(c) for c in source]
        if d is None:
            if not cubes:
                raise ValueError("empty trajectory")
            d = len(cubes[0])
    if not cubes:
        raise ValueError("empty trajectory")
    check_dim(d)
    offs = []
    for e in itertools.product((0, 1, 2), repeat=d):
        offs.append((_pack(e) - _pack((0,) * d), sum(x & 1 for x in e)))
    birth: dict[int, int] = {}
    dim_of: dict[int, int] = {}
    for step, c in enumerate(cubes, start=1):
        base = _pack(tuple(2 * x for x in c))
        for off, k in offs:
            f = base + off
            if f not in birth:
                birth[f] = step
                dim_of[f] = k
    order = sorted(birth, key=lambda f: (birth[f], dim_of[f], f))
    return FilteredComplex(d, order, [birth[f] for f in order], [dim_of[f] for f in order])


def persistence(fc: FilteredComplex) -> list[PersistenceInterval]:
    """Standard F2 column reduction with clearing, top dimension first.

    Zero-length pairs (both cells born at the same step) are dropped.
    """
    d = fc.d
    births, dims = fc.births, fc.dims
    by_dim: list[list[int]] = [[] for _ in range(d + 1)]
    for i, k in enumerate(dims):
        by_dim[k].append(i)
    cleared: set[int] = set()
    out: list[PersistenceInterval] = []
    bnd = fc.boundary_indices
    for k in range(d, 0, -1):
        low_to_col: dict[int, tuple[int, ...]] = {}
        for j in by_dim[k]:
            if j in cleared:
                continue
            col = set(bnd(j))
            low = max(col)
            other = low_to_col.get(low)
            while other is not None:
                col.symmetric_difference_update(other)
                if not col:
                    break
                low = max(col)
                other = low_to_col.get(low)
            if col:
                low_to_col[low] = tuple(col)
                cleared.add(low)
                if births[low] < births[j]:
                    out.append(PersistenceInterval(k - 1, births[low], births[j]))
            elif k < d:
                out.append(PersistenceInterval(k, births[j], None))
    for j in by_dim[0]:
        if j not in cleared:
            out.append(PersistenceInterval(0, births[j], None))
    return out


def betti_from_intervals(intervals: Iterable[PersistenceInterval], t: int, d: int) -> list[int]:
    out = [0] * d
    for iv in intervals:
        if iv.hdim < d and iv.contains(t):
            out[iv.hdim] += 1
    return out


def betti_series(intervals: Iterable[PersistenceInterval], t_max: int, d: int) -> list[list[int]]:
    """Row t-1 holds the Betti vector of A(t), for t = 1..t_max."""
    diff = [[0] * d for _ in range(t_max + 2)]
    for iv in intervals:
        if iv.hdim >= d or iv.birth > t_max:
            continue
        diff[iv.birth][iv.hdim] += 1
        if iv.death is not None and iv.death <= t_max:
            diff[iv.death][iv.hdim] -= 1
    out = []
    cur = [0] * d
    for t in range(1, t_max + 1):
        cur = [a + b for a, b in zip(cur, diff[t])]
        out.append(cur)
    return out


def filtration_births_bruteforce(cubes: Sequence[CellCoord]) -> dict[tuple[int, ...], int]:
    """Birth of every cell as the min step over cubes whose closure contains it."""
    out: dict[tuple[int, ...], int] = {}
    by_cell = defaultdict(list)
    for step, c in enumerate(cubes, start=1):
        for f in CubicalCell.of_cube(c).closure():
            by_cell[f.coords].append(step)
    for k, v in by_cell.items():
        out[k] = min(v)
    return out
