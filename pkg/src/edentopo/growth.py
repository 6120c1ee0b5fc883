"""Eden growth and its first-passage-percolation formulations.

``simulate`` runs the process from the origin cell and stores the
trajectory column-wise (packed tile keys plus optional per-step topology
columns written by hooks), so million-step runs stay compact.
"""
from __future__ import annotations

import heapq
import math
from array import array
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Protocol, Sequence, Union

from .lattice import CellCoord, GrowthState, LatticeError, Polyomino, codec_for
from .rng import RandomStream

EVENT_NAMES = ("none", "birth", "split", "death")
EVENT_CODES = {name: i for i, name in enumerate(EVENT_NAMES)}


class PassageLaw(Protocol):
    name: str

    def sample(self, rng: RandomStream) -> float: ...


@dataclass(frozen=True)
class Exponential:
    mean: float = 1.0
    name: str = "exponential"

    def sample(self, rng: RandomStream) -> float:
        return rng.exponential(self.mean)


@dataclass(frozen=True)
class EdenUniform:
    label = "eden"


@dataclass(frozen=True)
class SiteFPP:
    law: PassageLaw = Exponential()
    label = "site_fpp"


@dataclass(frozen=True)
class BondFPP:
    law: PassageLaw = Exponential()
    label = "bond_fpp"


GrowthMode = Union[EdenUniform, SiteFPP, BondFPP]


def mode_from_name(name: str, mean: float = 1.0) -> GrowthMode:
    if name == "eden":
        return EdenUniform()
    if name == "site_fpp":
        return SiteFPP(Exponential(mean))
    if name == "bond_fpp":
        return BondFPP(Exponential(mean))
    raise ValueError(f"unknown growth mode {name!r}")


def mode_to_dict(mode: GrowthMode | None) -> dict | None:
    if mode is None:
        return None
    out = {"kind": mode.label}
    law = getattr(mode, "law", None)
    if law is not None:
        out["law"] = {"name": law.name, "mean": getattr(law, "mean", None)}
    return out


class SimulationError(RuntimeError):
    """A run could not complete (resource or budget limit)."""


class GrowthEvent:
    """One addition: Eden step, tile, FPP clock and topology deltas."""

    __slots__ = ("step", "key", "fpp_time", "topo", "_codec")

    def __init__(self, step: int, key: int, codec, fpp_time: float | None = None, topo: dict | None = None):
        self.step = step
        self.key = key
        self.fpp_time = fpp_time
        self.topo = topo
        self._codec = codec

    @property
    def tile(self) -> CellCoord:
        return self._codec.decode(self.key)

    def __repr__(self):
        return f"GrowthEvent(step={self.step}, tile={self.tile}, fpp_time={self.fpp_time}, topo={self.topo})"


Hook = Callable[[GrowthState, GrowthEvent], None]


@dataclass
class Trajectory:
    """Append-only log of a run.

    ``tiles[0]`` is the origin (step 1); ``tiles[k]`` was added at step k+1.
    ``db[i][k]`` is the change of beta_i at step k+2 when dimension i was
    tracked; ``hole_events[k]`` likewise holds an ``EVENT_NAMES`` code.
    """

    seed: int
    mode: GrowthMode | None
    d: int
    tiles: list[int] = field(default_factory=list)
    fpp_times: list[float] | None = None
    db: dict[int, array] = field(default_factory=dict)
    hole_events: bytearray | None = None
    snapshots: list[tuple[int, Polyomino]] = field(default_factory=list)
    kind: str = "growth"
    start: Polyomino | None = None
    extra: dict = field(default_factory=dict)

    @property
    def codec(self):
        return codec_for(self.d)

    @property
    def t(self) -> int:
        return len(self.tiles)

    def cells(self) -> list[CellCoord]:
        dec = self.codec.decode
        return [dec(k) for k in self.tiles]

    @property
    def events(self) -> list[GrowthEvent]:
        return list(self.iter_events())

    def iter_events(self) -> Iterator[GrowthEvent]:
        cod = self.codec
        first = 2 if self.kind == "growth" else 1
        tiles = self.tiles[1:] if self.kind == "growth" else self.tiles
        for k, key in enumerate(tiles):
            topo = None
            if self.db or self.hole_events is not None:
                topo = {"db": {i: col[k] for i, col in self.db.items()}}
                if self.hole_events is not None:
                    topo["hole_event"] = EVENT_NAMES[self.hole_events[k]]
            fpp = None
            if self.fpp_times is not None:
                fpp = self.fpp_times[k + (1 if self.kind == "growth" else 0)]
            yield GrowthEvent(k + first, key, cod, fpp, topo)

    def replay(self, upto: int | None = None) -> GrowthState:
        """Fold the tiles through ``add_tile`` from the origin."""
        if self.kind != "growth":
            raise ValueError("only growth trajectories can be replayed")
        upto = self.t if upto is None else upto
        if not 1 <= upto <= self.t:
            raise ValueError(f"step {upto} outside [1, {self.t}]")
        state = GrowthState(self.d)
        state._seed(self.tiles[0])
        for key in self.tiles[1:upto]:
            state.add_key(key)
        return state

    def polyomino_at(self, t: int) -> Polyomino:
        dec = self.codec.decode
        return Polyomino(frozenset(dec(k) for k in self.tiles[:t]), self.d)


def eden_step(state: GrowthState, rng: RandomStream) -> CellCoord:
    """Add a uniformly chosen site-perimeter cell; return it."""
    items = state.perimeter.items
    assert items, "empty site perimeter"
    key = items[rng.below(len(items))]
    state.add_key(key)
    return state.codec.decode(key)


class FPPClocks:
    """Pending infection times for perimeter cells, assigned lazily.

    Site mode draws one passage time when a cell enters the perimeter.
    Bond mode draws one per new occupied face-neighbor and keeps the
    minimum, so the hazard of a cell is proportional to its bond count.
    """

    def __init__(self, state: GrowthState, rng: RandomStream, mode: SiteFPP | BondFPP):
        if not isinstance(mode, (SiteFPP, BondFPP)):
            raise TypeError("FPP clocks need a SiteFPP or BondFPP mode")
        self.mode = mode
        self.bond = isinstance(mode, BondFPP)
        self.rng = rng
        self.now = 0.0
        self.heap: list[tuple[float, int]] = []
        self.best: dict[int, float] = {}
        occ = state.occupied
        offs = state.codec.face_offsets
        for n in state.perimeter.items:
            if self.bond:
                for off in offs:
                    if n + off in occ:
                        self._offer(n, self.now + mode.law.sample(rng))
            else:
                self._offer(n, self.now + mode.law.sample(rng))

    def _offer(self, key: int, t: float) -> None:
        b = self.best.get(key)
        if b is None or t < b:
            self.best[key] = t
            heapq.heappush(self.heap, (t, key))

    def pop(self, state: GrowthState) -> tuple[int, float]:
        heap, best, perim = self.heap, self.best, state.perimeter.index
        while heap:
            t, key = heapq.heappop(heap)
            if best.get(key) == t and key in perim:
                del best[key]
                self.now = t
                return key, t
        raise AssertionError("no pending clocks on a nonempty perimeter")

    def after_add(self, state: GrowthState, key: int) -> None:
        law, rng, now = self.mode.law, self.rng, self.now
        if self.bond:
            occ = state.occupied
            for off in state.codec.face_offsets:
                n = key + off
                if n not in occ:
                    self._offer(n, now + law.sample(rng))
        else:
            for n in state.last_new_perimeter:
                self._offer(n, now + law.sample(rng))


def fpp_step(state: GrowthState, clocks: FPPClocks, rng: RandomStream | None = None,
             mode: GrowthMode | None = None) -> tuple[CellCoord, float]:
    """Infect the perimeter cell with the earliest pending clock."""
    key, t = clocks.pop(state)
    state.add_key(key)
    clocks.after_add(state, key)
    return state.codec.decode(key), t


def simulate(d: int, t_max: int, seed: int, mode: GrowthMode | None = None,
             hooks: Sequence[Hook] = (), snapshot_every: int | None = None) -> Trajectory:
    """Grow from the origin cell until the cluster has ``t_max`` cells.

    Hooks run in order after every addition, receiving the state and the
    step's :class:`GrowthEvent`; anything they store under
    ``event.topo['db']`` / ``event.topo['hole_event']`` is logged.
    Objects with a ``start(state)`` method get it called once on the
    single-cell state.
    """
    if not isinstance(t_max, int) or t_max < 1:
        raise ValueError(f"t_max must be a positive integer, got {t_max!r}")
    mode = EdenUniform() if mode is None else mode
    rng = RandomStream(seed)
    state = GrowthState.single(d)
    cod = state.codec
    traj = Trajectory(seed=seed, mode=mode, d=d, tiles=[cod.origin])
    clocks = None
    if not isinstance(mode, EdenUniform):
        clocks = FPPClocks(state, rng, mode)
        traj.fpp_times = [0.0]
    for h in hooks:
        start = getattr(h, "start", None)
        if start is not None:
            start(state)
    if snapshot_every:
        traj.snapshots.append((1, state.polyomino()))

    tiles = traj.tiles
    perim = state.perimeter
    below = rng.below
    add_key = state.add_key
    hooks = tuple(hooks)
    db_cols: dict[int, array] = {}
    hole_col = None
    try:
        for step in range(2, t_max + 1):
            r = None
            if clocks is None:
                items = perim.items
                key = items[below(len(items))]
                add_key(key)
            else:
                key, r = clocks.pop(state)
                add_key(key)
                clocks.after_add(state, key)
                traj.fpp_times.append(r)
            tiles.append(key)
            if hooks:
                ev = GrowthEvent(step, key, cod, r, {})
                for h in hooks:
                    h(state, ev)
                topo = ev.topo
                if topo:
                    for i, v in topo.get("db", {}).items():
                        col = db_cols.get(i)
                        if col is None:
                            if step != 2:
                                raise ValueError(f"hook started reporting beta_{i} deltas mid-run")
                            col = db_cols[i] = array("h")
                        col.append(v)
                    he = topo.get("hole_event")
                    if he is not None:
                        if hole_col is None:
                            hole_col = bytearray()
                        hole_col.append(EVENT_CODES[he])
            if snapshot_every and step % snapshot_every == 0:
                traj.snapshots.append((step, state.polyomino()))
    except MemoryError as e:
        raise SimulationError(f"out of memory at step {state.step}") from e
    except LatticeError as e:
        raise SimulationError(str(e)) from e
    traj.db = db_cols
    traj.hole_events = hole_col
    traj.extra["final_state"] = state
    return traj


def reverse_process(hole: Polyomino, seed: int) -> Trajectory:
    """Shrink ``hole`` by removing uniformly chosen cells adjacent to its complement."""
    from .holetrack import ReverseProcess

    if not hole.cells:
        raise ValueError("hole must be nonempty")
    proc = ReverseProcess(hole)
    rng = RandomStream(seed)
    while proc.remaining:
        items = proc.exposed.items
        proc.remove_key(items[rng.below(len(items))])
    return proc.trajectory(seed)
