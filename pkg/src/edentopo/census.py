"""Combinatorial facts about one-step Betti changes and local patterns.

``jump_config`` builds, inside the 5^d grid around a center cube Q, a
tile set whose intersection with Q is a chosen subcomplex R of the
boundary of Q and which deformation retracts onto a larger subcomplex S.
Adding Q then changes homology by H_*(S, R).  Faces of Q are written as
sign vectors e in {-1, 0, 1}^d: e_j = -1 or +1 pins coordinate j to 0 or
1, and e_j = 0 lets it span [0, 1].  The last axis is "up".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .growth import Trajectory
from .homology import betti
from .lattice import (
    CellCoord,
    GrowthState,
    LatticeError,
    Polyomino,
    apply_symmetry,
    check_dim,
    is_face_connected,
    parse_polyomino,
    signed_permutations,
)


def face_count(d: int, i: int) -> int:
    """Number of i-dimensional faces of the d-cube."""
    if d < 0 or not 0 <= i <= d:
        raise ValueError(f"need 0 <= i <= d, got d={d}, i={i}")
    return 2 ** (d - i) * comb(d, i)


@dataclass(frozen=True)
class JumpBounds:
    d: int
    i: int
    lo: int
    hi: int

    def __contains__(self, delta: int) -> bool:
        return self.lo <= delta <= self.hi


def jump_bounds(d: int, i: int) -> JumpBounds:
    """Extremes of the change of beta_i when one tile is added."""
    if not 1 <= i <= d - 1:
        raise ValueError(f"need 1 <= i <= d-1, got d={d}, i={i}")
    return JumpBounds(d, i, -face_count(d - 1, i), 2 ** (d - i) * comb(d - 1, i - 1))


# --- extremal configurations --------------------------------------------

Face = tuple[int, ...]


def _subfaces(e: Face) -> list[Face]:
    choices = [(x,) if x else (-1, 0, 1) for x in e]
    return [f for f in itertools.product(*choices)]


def _closure(faces: Iterable[Face]) -> set[Face]:
    out: set[Face] = set()
    for e in faces:
        out.update(_subfaces(e))
    return out


def _face_dim(e: Face) -> int:
    return sum(1 for x in e if x == 0)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def build_rs(d: int, R: set[Face], S: set[Face]) -> Polyomino:
    """Tiles of the 5^d grid (offsets -2..2 from Q) realizing the pair (R, S)."""
    cells = []
    for x in itertools.product(range(-2, 3), repeat=d):
        m = max(abs(v) for v in x)
        if m == 0:
            continue
        e = tuple(_sign(v) for v in x)
        if m == 1 and e in R:
            cells.append(x)
        elif m == 2 and e in S:
            cells.append(x)
    return Polyomino(frozenset(cells), d)


@dataclass
class JumpConfig:
    d: int
    i: int
    k: int
    part: str
    polyomino: Polyomino
    center: CellCoord
    claimed: dict[int, int]
    before: list[int] = field(default_factory=list)
    after: list[int] = field(default_factory=list)

    @property
    def measured(self) -> dict[int, int]:
        return {j: self.after[j] - self.before[j] for j in range(self.d) if self.after[j] != self.before[j]}


def jump_config(d: int, i: int, k: int, part: str) -> JumpConfig:
    """Polyomino where adding the center cube (the origin) moves beta_i by
    -k and beta_{i+1} by J-k (part "a"), or beta_1 by +k (part "b").

    The result is checked against ``betti`` before it is returned.
    """
    check_dim(d)
    base = tuple([0] * (d - 1) + [-1])
    if part == "a":
        if not 1 <= i <= d - 1:
            raise ValueError(f"part a needs 1 <= i <= d-1, got i={i}")
        J = face_count(d - 1, i)
        if not 0 <= k <= J:
            raise ValueError(f"part a needs 0 <= k <= {J}, got k={k}")
        if i == d - 1 and k == 0:
            # would need beta_d to grow, impossible for a subset of R^d
            raise ValueError("part a with i = d-1 requires k = 1")
        skel = [e for e in itertools.product((-1, 0, 1), repeat=d) if any(e) and _face_dim(e) <= i]
        R = _closure([base] + skel)
        vertical = sorted(
            (e for e in itertools.product((-1, 0, 1), repeat=d)
             if e[-1] == 0 and _face_dim(e) == i + 1),
            reverse=True,
        )
        S = R | _closure(vertical[: J - k]) if i < d - 1 else set(R)
        claimed = {i: -k} if k else {}
        if i + 1 < d and J - k:
            claimed[i + 1] = J - k
    elif part == "b":
        J = 2 ** (d - 1)
        if not 1 <= k <= J:
            raise ValueError(f"part b needs 1 <= k <= {J}, got k={k}")
        tops = sorted((e for e in itertools.product((-1, 1), repeat=d) if e[-1] == 1), reverse=True)[:k]
        R = _closure([base] + tops)
        S = R | _closure([t[:-1] + (0,) for t in tops])
        claimed = {1: k}
        i = 0
    else:
        raise ValueError(f"part must be 'a' or 'b', got {part!r}")
    poly = build_rs(d, R, S)
    center = (0,) * d
    cfg = JumpConfig(d, i, k, part, poly, center, claimed)
    certify(cfg)
    return cfg


def certify(cfg: JumpConfig) -> None:
    p = cfg.polyomino
    if not is_face_connected(p.cells):
        raise AssertionError(f"construction {cfg.part}(d={cfg.d}, i={cfg.i}, k={cfg.k}) is disconnected")
    cfg.before = betti(p)
    cfg.after = betti(Polyomino(p.cells | {cfg.center}, p.d))
    if cfg.measured != cfg.claimed:
        raise AssertionError(
            f"construction {cfg.part}(d={cfg.d}, i={cfg.i}, k={cfg.k}): "
            f"measured {cfg.measured}, claimed {cfg.claimed}"
        )


def all_jump_params(d: int) -> list[tuple[int, int, str]]:
    out = []
    for i in range(1, d):
        for k in range(face_count(d - 1, i) + 1):
            if not (i == d - 1 and k == 0):
                out.append((i, k, "a"))
    for k in range(1, 2 ** (d - 1) + 1):
        out.append((1, k, "b"))
    return out


# --- local pattern census -----------------------------------------------

@dataclass(frozen=True)
class LocalPattern:
    R: int
    d: int
    occupied: frozenset
    require_base: bool = False

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("window side must be positive")
        for c in self.occupied:
            if len(c) != self.d or not all(0 <= x < self.R for x in c):
                raise ValueError(f"cell {c} lies outside the window [0,{self.R})^{self.d}")
        if self.require_base:
            missing = [c for c in itertools.product(range(self.R), repeat=self.d - 1)
                       if c + (0,) not in self.occupied]
            if missing:
                raise ValueError(f"base layer incomplete, e.g. {missing[0] + (0,)} is empty")

    def array(self) -> np.ndarray:
        a = np.zeros((self.R,) * self.d, dtype=bool)
        for c in self.occupied:
            a[c] = True
        return a

    def orientations(self) -> list[frozenset]:
        """Distinct images under the signed axis permutations."""
        seen = []
        for perm, signs in signed_permutations(self.d):
            img = apply_symmetry(self.occupied, perm, signs)
            img = frozenset(tuple(x + self.R if s < 0 else x for x, s in zip(c, signs)) for c in img)
            if img not in seen:
                seen.append(img)
        return seen

    def to_text(self) -> str:
        head = f"R={self.R}\nrequire_base={int(self.require_base)}\n"
        return head + Polyomino(self.occupied, self.d).to_text()

    @classmethod
    def from_text(cls, text: str) -> "LocalPattern":
        poly, flags = parse_polyomino(text.splitlines(), allow_flags=True)
        unknown = set(flags) - {"R", "require_base"}
        if unknown:
            raise LatticeError(f"unknown pattern header(s): {sorted(unknown)}")
        if "R" not in flags:
            raise LatticeError("pattern header R=<int> is required")
        rb = flags.get("require_base", "0")
        if rb not in ("0", "1"):
            raise LatticeError(f"require_base must be 0 or 1, got {rb!r}")
        return cls(int(flags["R"]), poly.d, poly.cells, rb == "1")


def handle_pattern(d: int, i: int) -> LocalPattern:
    """Full base layer of the 5^d window plus a handle homotopic to S^i."""
    if not 1 <= i <= d - 1:
        raise ValueError(f"need 1 <= i <= d-1, got {i}")
    cells = set()
    for c in itertools.product(range(5), repeat=d - 1):
        cells.add(c + (0,))
    for tail in itertools.product(range(1, 4), repeat=i + 1):
        c = (2,) * (d - i - 1) + tail
        if c != (2,) * d:
            cells.add(c)
    return LocalPattern(5, d, frozenset(cells), require_base=True)


def occupancy_array(cells: Iterable[CellCoord], d: int, pad: int) -> tuple[np.ndarray, np.ndarray]:
    pts = np.array(list(cells), dtype=np.int64).reshape(-1, d)
    lo = pts.min(axis=0) - pad
    hi = pts.max(axis=0) + pad
    a = np.zeros(tuple(hi - lo + 1), dtype=bool)
    a[tuple((pts - lo).T)] = True
    return a, lo


def pattern_census(state: GrowthState | Polyomino, p: LocalPattern, rotations: bool = False) -> int:
    """Number of lattice-aligned width-R windows whose occupied cells are
    exactly the pattern (or, with ``rotations``, any of its images)."""
    cells = state.cells() if isinstance(state, GrowthState) else list(state.cells)
    if not cells:
        return 0
    d = p.d
    if len(cells[0]) != d:
        raise LatticeError("pattern and state dimensions differ")
    R = p.R
    occ, _ = occupancy_array(cells, d, R - 1)
    n_win = tuple(s - R + 1 for s in occ.shape)
    orients = p.orientations() if rotations else [p.occupied]
    total = 0
    for cs in orients:
        ok = np.ones(n_win, dtype=bool)
        for o in itertools.product(range(R), repeat=d):
            sl = tuple(slice(x, x + n) for x, n in zip(o, n_win))
            if o in cs:
                ok &= occ[sl]
            else:
                ok &= ~occ[sl]
        total += int(ok.sum())
    return total


# --- jump histograms ----------------------------------------------------

@dataclass
class JumpHistogram:
    d: int
    bin_width: int
    n_bins: int
    counts: dict[tuple[int, int], np.ndarray]

    def total(self, i: int, delta: int) -> int:
        c = self.counts.get((i, delta))
        return 0 if c is None else int(c.sum())

    def frequencies(self, i: int) -> dict[int, np.ndarray]:
        """Per-bin fraction of steps with each delta of beta_i."""
        rows = {dl: c for (j, dl), c in self.counts.items() if j == i}
        tot = sum(rows.values())
        return {dl: np.divide(c, tot, out=np.zeros(len(c)), where=tot > 0) for dl, c in rows.items()}


def jump_histogram_from_events(traj: Trajectory, bin_width: int = 50_000) -> JumpHistogram:
    """Counts of each per-step change of each tracked beta_i, in bins of steps.

    Step s falls in bin (s-1) // bin_width.
    """
    if bin_width < 1:
        raise ValueError("bin width must be positive")
    if not traj.db:
        raise ValueError("trajectory carries no Betti deltas")
    n_bins = (traj.t - 1) // bin_width + 1
    steps = np.arange(2, traj.t + 1)
    bins = (steps - 1) // bin_width
    counts = {}
    for i, col in sorted(traj.db.items()):
        vals = np.frombuffer(col, dtype=np.int16) if len(col) else np.zeros(0, dtype=np.int16)
        for dl in np.unique(vals):
            sel = vals == dl
            counts[(i, int(dl))] = np.bincount(bins[sel], minlength=n_bins)
    return JumpHistogram(traj.d, bin_width, n_bins, counts)


def jump_violations(traj: Trajectory) -> list[tuple[int, int, int]]:
    """(step, i, delta) for every tracked change outside the jump bounds."""
    out = []
    for i, col in sorted(traj.db.items()):
        if not 1 <= i <= traj.d - 1:
            continue
        jb = jump_bounds(traj.d, i)
        vals = np.frombuffer(col, dtype=np.int16)
        for k in np.nonzero((vals < jb.lo) | (vals > jb.hi))[0]:
            out.append((int(k) + 2, i, int(vals[k])))
    return out
