"""Aggregates over runs: growth-law fits, perimeter series, hole statistics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .growth import GrowthEvent
from .holetrack import (
    ComplementMap,
    HoleRecord,
    canonical_free,
    cells_from_key,
    fixed_multiplicity,
    hole_births,
)
from .homology import PersistenceInterval
from .lattice import GrowthState, normalize

AREA_CAP = 6


@dataclass
class TimeSeries:
    checkpoints: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.checkpoints = np.asarray(self.checkpoints, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=float)
        if self.checkpoints.shape != self.values.shape:
            raise ValueError("checkpoints and values differ in length")
        if np.any(np.diff(self.checkpoints) <= 0):
            raise ValueError("checkpoints must be strictly increasing")

    def __len__(self) -> int:
        return len(self.checkpoints)

    def at(self, t: int) -> float:
        i = np.searchsorted(self.checkpoints, t)
        if i == len(self.checkpoints) or self.checkpoints[i] != t:
            raise KeyError(f"no checkpoint at t={t}")
        return float(self.values[i])

    def window(self, t_min: float, t_max: float) -> "TimeSeries":
        sel = (self.checkpoints >= t_min) & (self.checkpoints <= t_max)
        return TimeSeries(self.checkpoints[sel], self.values[sel], self.label)


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    coefficient: float
    t_min: int
    t_max: int
    residual: float
    n: int

    def __call__(self, t):
        return self.coefficient * np.asarray(t, dtype=float) ** self.exponent


def fit_power_law(s: TimeSeries, window: tuple[float, float | None] = (1e4, None)) -> PowerLawFit:
    """Ordinary least squares of log(value) on log(t) inside ``window``.

    ``residual`` is the RMS of the log-space residuals.
    """
    lo, hi = window
    hi = math.inf if hi is None else hi
    w = s.window(lo, hi)
    if len(w) < 10:
        raise ValueError(f"need at least 10 checkpoints in the window, got {len(w)}")
    if np.any(w.values <= 0):
        raise ValueError("power-law fit needs positive values")
    x = np.log(w.checkpoints.astype(float))
    y = np.log(w.values)
    A = np.column_stack([x, np.ones_like(x)])
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - (slope * x + icpt)
    return PowerLawFit(float(slope), float(math.exp(icpt)), int(w.checkpoints[0]), int(w.checkpoints[-1]),
                       float(np.sqrt(np.mean(res ** 2))), len(w))


def default_checkpoints(t_max: int, every: int | None = None, per_decade: int = 20) -> list[int]:
    """Log-spaced steps (plus multiples of ``every``) up to and including t_max."""
    pts = {t_max}
    n = int(math.log10(max(t_max, 1)) * per_decade) + 1
    for k in range(n + 1):
        t = int(round(10 ** (k / per_decade)))
        if 1 <= t <= t_max:
            pts.add(t)
    if every:
        pts.update(range(every, t_max + 1, every))
    return sorted(pts)


class SeriesRecorder:
    """Hook recording P, OutP, InnP and tracked Betti numbers at checkpoints.

    Register it after the :class:`ComplementMap` whose deltas it reads.
    """

    def __init__(self, cm: ComplementMap, checkpoints: Iterable[int]):
        self.cm = cm
        self.checkpoints = sorted(set(checkpoints))
        self._next = 0
        self.rows: list[tuple] = []
        self.beta: dict[int, int] = {}

    def start(self, state: GrowthState) -> None:
        self.beta = {0: 1}
        if state.d - 1 >= 1:
            self.beta[state.d - 1] = self.cm.n_holes
        if self.cm.euler and state.d == 3:
            self.beta[1] = 0
        self._maybe(state)

    def _maybe(self, state: GrowthState) -> None:
        cps = self.checkpoints
        while self._next < len(cps) and cps[self._next] < state.step:
            self._next += 1
        if self._next < len(cps) and cps[self._next] == state.step:
            out, inn = self.cm.perimeter_split(state)
            self.rows.append((state.step, out + inn, out, inn,
                              tuple(self.beta.get(i) for i in range(1, state.d))))
            self._next += 1

    def __call__(self, state: GrowthState, ev: GrowthEvent) -> None:
        db = ev.topo.get("db", {}) if ev.topo else {}
        for i, v in db.items():
            self.beta[i] = self.beta.get(i, 0) + v
        self._maybe(state)

    def series(self, name: str) -> TimeSeries:
        t = [r[0] for r in self.rows]
        if name == "P":
            v = [r[1] for r in self.rows]
        elif name == "OutP":
            v = [r[2] for r in self.rows]
        elif name == "InnP":
            v = [r[3] for r in self.rows]
        elif name == "OutP/P":
            v = [r[2] / r[1] for r in self.rows]
        elif name.startswith("beta_"):
            i = int(name[5:])
            if self.rows and not 1 <= i <= len(self.rows[0][4]):
                raise KeyError(f"{name} out of range")
            v = [r[4][i - 1] for r in self.rows]
            if any(x is None for x in v):
                raise KeyError(f"{name} was not tracked")
        else:
            raise KeyError(name)
        return TimeSeries(t, v, name)


# --- persistence --------------------------------------------------------

@dataclass
class NormPersHistogram:
    d: int
    bin_width: float
    edges: np.ndarray
    counts: np.ndarray
    values: np.ndarray
    n_open: int

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def density(self) -> np.ndarray:
        return self.counts / max(self.n, 1)

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.values, q)) if len(self.values) else math.nan


def normalized_lifetime(iv: PersistenceInterval, d: int) -> float:
    return (iv.death - iv.birth) / iv.birth ** ((d - 1) / d)


def normalized_persistence(intervals: Iterable[PersistenceInterval], window: tuple[int, int], d: int,
                           hdim: int | None = None, bin_width: float = 0.25) -> NormPersHistogram:
    """Histogram of (death - birth) / birth^((d-1)/d) for intervals born in
    ``window`` (inclusive).  Open intervals are excluded and counted."""
    lo, hi = window
    vals = []
    n_open = 0
    for iv in intervals:
        if hdim is not None and iv.hdim != hdim:
            continue
        if not lo <= iv.birth <= hi:
            continue
        if iv.death is None:
            n_open += 1
            continue
        vals.append(normalized_lifetime(iv, d))
    v = np.array(vals, dtype=float)
    top = (math.floor(v.max() / bin_width) + 1) if len(v) else 1
    edges = np.arange(top + 1) * bin_width
    counts = np.bincount(np.floor(v / bin_width).astype(np.int64), minlength=top) if len(v) else np.zeros(1, np.int64)
    return NormPersHistogram(d, bin_width, edges, counts, v, n_open)


def total_variation(a: NormPersHistogram, b: NormPersHistogram) -> float:
    n = max(len(a.counts), len(b.counts))
    pa = np.zeros(n)
    pb = np.zeros(n)
    pa[: len(a.counts)] = a.density()
    pb[: len(b.counts)] = b.density()
    return 0.5 * float(np.abs(pa - pb).sum())


# --- holes --------------------------------------------------------------

def _volumes(holes: Iterable[HoleRecord], at) -> list[int]:
    if at == "birth":
        return [len(cells) for _, cells, _ in hole_births(holes)]
    if isinstance(at, (int, np.integer)):
        return [v for v in (h.volume_at(int(at)) for h in holes) if v > 0]
    raise ValueError(f"'at' must be 'birth' or a step, got {at!r}")


def hole_area_distribution(holes: Iterable[HoleRecord], at="birth") -> dict[int, float]:
    """Fraction of holes with volume 1..5 and >= 6 (key 6).

    ``at="birth"`` counts every hole ever created at its creation volume,
    where a split creates all of its fragments; an integer ``at`` counts the holes
    alive after that step at their volume then.
    """
    vols = _volumes(holes, at)
    if not vols:
        return {}
    c = Counter(min(v, AREA_CAP) for v in vols)
    n = len(vols)
    return {a: c.get(a, 0) / n for a in range(1, AREA_CAP + 1)}


def hole_area_counts(holes: Iterable[HoleRecord], at="birth") -> Counter:
    return Counter(min(v, AREA_CAP) for v in _volumes(holes, at))


@dataclass(frozen=True)
class ShapeFreq:
    key: str
    count: int
    frequency: float
    multiplicity: int

    @property
    def per_fixed(self) -> float:
        return self.frequency / self.multiplicity


def shape_counts(holes: Iterable[HoleRecord], area: int, at="birth") -> Counter:
    """Free-shape counts of holes of the given area.

    Snapshot mode (integer ``at``) uses the birth shape of holes that have
    not shrunk since, and ``final_cells`` (see ``ComplementMap.finalize``)
    for holes that have.
    """
    c: Counter = Counter()
    if at == "birth":
        for _, cells, key in hole_births(holes):
            if len(cells) == area:
                c[key or free_shape_key(cells)] += 1
        return c
    for h in holes:
        v = h.volume_at(int(at))
        if v != area:
            continue
        if v == h.volume_at_birth:
            c[h.shape_free or free_shape_key(h.cells)] += 1
        elif h.final_cells:
            c[free_shape_key(h.final_cells)] += 1
    return c


_FREE_MEMO: dict[tuple, str] = {}


def free_shape_key(cells) -> str:
    norm = normalize(cells)
    k = _FREE_MEMO.get(norm)
    if k is None:
        k = _FREE_MEMO[norm] = canonical_free(norm)
    return k


def shape_distribution(holes: Iterable[HoleRecord], area: int, at="birth",
                       counts: Counter | None = None) -> dict[str, ShapeFreq]:
    c = shape_counts(holes, area, at) if counts is None else counts
    n = sum(c.values())
    out = {}
    for key, k in sorted(c.items()):
        out[key] = ShapeFreq(key, k, k / n, fixed_multiplicity(cells_from_key(key)))
    return out


@dataclass(frozen=True)
class LargestHole:
    birth_volume: int
    birth_id: int | None
    alive_volume: int
    alive_id: int | None


def largest_hole(holes: Iterable[HoleRecord], t: int | None = None) -> LargestHole:
    """Largest volume at creation, and largest volume alive after step ``t``
    (the end of the run when ``t`` is None)."""
    bv, bid, av, aid = 0, None, 0, None
    for h in holes:
        if h.volume_at_birth > bv:
            bv, bid = h.volume_at_birth, h.id
        v = (h.volume_history[-1][1] if h.death is None else 0) if t is None else h.volume_at(t)
        if v > av:
            av, aid = v, h.id
    return LargestHole(bv, bid, av, aid)


def beta_upper_bound(d: int, i: int, perimeter: int) -> int:
    """Upper bound on beta_i given the site perimeter size."""
    from .census import face_count

    if i == d - 1:
        return perimeter
    return face_count(d, i) * perimeter


def mean_sd(xs: Sequence[float]) -> tuple[float, float]:
    a = np.asarray(xs, dtype=float)
    return float(a.mean()), float(a.std(ddof=1)) if len(a) > 1 else 0.0
