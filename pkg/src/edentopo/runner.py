"""Batch runs: one directory per seed plus a manifest written last."""
from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from . import formats as fmt
from .census import LocalPattern, jump_violations, pattern_census
from .growth import mode_from_name, mode_to_dict, simulate
from .holetrack import ComplementMap, barcode_dminus1, cells_from_key, complement_components, fixed_multiplicity
from .homology import build_filtration, euler_characteristic, persistence
from .lattice import MAX_DIM, MIN_DIM, Polyomino
from .rng import RNG_NAME
from .stats import (
    AREA_CAP,
    PowerLawFit,
    SeriesRecorder,
    TimeSeries,
    default_checkpoints,
    fit_power_law,
    free_shape_key,
    mean_sd,
)

DEFAULT_PH_BUDGET = 250_000
OUT_DIR_ENV = "EDEN_OUT_DIR"


class ConfigError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


class CheckFailed(AssertionError):
    pass


@dataclass
class RunConfig:
    d: int
    t_max: int
    seeds: list[int]
    mode: str = "eden"
    mean: float = 1.0
    snapshot_every: int | None = None
    series_every: int | None = None
    holes: bool = True
    full_ph: bool = False
    ph_budget: int = DEFAULT_PH_BUDGET
    patterns: list[str] = field(default_factory=list)
    rotations: bool = False
    check: bool = False
    workers: int = 1
    out_dir: str | None = None

    def validate(self) -> None:
        if not isinstance(self.d, int) or not MIN_DIM <= self.d <= MAX_DIM:
            raise ConfigError(f"dimension must be in [{MIN_DIM}, {MAX_DIM}], got {self.d}")
        if self.t_max < 1:
            raise ConfigError("t_max must be at least 1")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if any(s < 0 or s >= 2 ** 64 for s in self.seeds):
            raise ConfigError("seeds must lie in [0, 2^64)")
        try:
            mode_from_name(self.mode, self.mean)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.full_ph and self.t_max > self.ph_budget:
            raise BudgetError(f"full persistence requested for t_max={self.t_max} > budget {self.ph_budget}")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ConfigError("snapshot interval must be positive")
        if self.check and not self.holes:
            raise ConfigError("--check needs hole tracking")
        if self.workers < 1:
            raise ConfigError("workers must be positive")

    def out_path(self) -> Path:
        d = self.out_dir or os.environ.get(OUT_DIR_ENV)
        if not d:
            raise ConfigError(f"no output directory (pass --out or set {OUT_DIR_ENV})")
        return Path(d)

    def manifest_dict(self) -> dict:
        out = asdict(self)
        # outputs must not depend on where they were written or how fast
        out.pop("out_dir")
        out.pop("workers")
        return out


def seed_dir(root: Path, seed: int) -> Path:
    return root / f"seed_{seed}"


def _sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_seed(cfg: RunConfig, seed: int, root: Path) -> dict:
    """Simulate one seed and write its files; returns a summary dict."""
    d = cfg.d
    mode = mode_from_name(cfg.mode, cfg.mean)
    hooks = []
    cm = rec = None
    patterns = [(p, LocalPattern.from_text(Path(p).read_text(encoding="utf-8"))) for p in cfg.patterns]
    census_rows = []
    if cfg.holes:
        cm = ComplementMap(d)
        rec = SeriesRecorder(cm, default_checkpoints(cfg.t_max, cfg.series_every))
        hooks = [cm, rec]
    snaps = []
    if cfg.snapshot_every:
        every = cfg.snapshot_every

        def snap(state, ev):
            if ev.step % every == 0:
                snaps.append(ev.step)
                for name, pat in patterns:
                    census_rows.append((ev.step, Path(name).name, pattern_census(state, pat, cfg.rotations)))
        hooks.append(snap)
    traj = simulate(d, cfg.t_max, seed, mode, hooks)
    state = traj.extra.pop("final_state")
    out = seed_dir(root, seed)
    out.mkdir(parents=True, exist_ok=True)
    files = []

    def done(name):
        files.append(name)
        return out / name

    fmt.write_events(done("events.csv"), traj)
    summary = {"seed": seed, "t": traj.t, "P": len(state.perimeter)}
    if cm is not None:
        cm.finalize()
        records = list(cm.records.values())
        fmt.write_series(done("series.csv"), d, rec.rows)
        fmt.write_holes(done("holes.csv"), records)
        fmt.write_creations(done("creations.csv"), records, free_shape_key if d <= 5 else lambda c: "")
        fmt.write_alive(done("holes_alive.csv"), records, free_shape_key if d <= 5 else lambda c: "")
        fmt.write_tree(done("split_tree.json"), cm.tree())
        fmt.write_barcode(done("barcode_top.csv"), barcode_dminus1(cm.tree(), d))
        outp, innp = cm.perimeter_split(state)
        summary.update(OutP=outp, InnP=innp, holes_alive=cm.n_holes, holes_created=len(records))
        summary["jump_violations"] = len(jump_violations(traj))
    if cfg.full_ph:
        fmt.write_barcode(done("barcode.csv"), persistence(build_filtration(traj)))
    cells = traj.cells()
    for t in snaps:
        (out / f"cubical_{t}.txt").write_text(fmt.cubical_text(cells, t), encoding="utf-8")
        files.append(f"cubical_{t}.txt")
    if census_rows:
        fmt.write_csv(done("census.csv"), ["t", "pattern", "count"], census_rows)
    if cfg.check:
        summary["check"] = duality_check(cm, state)
    summary["sha256"] = {f: _sha(out / f) for f in sorted(files)}
    return summary


def duality_check(cm: ComplementMap, state) -> dict:
    """Compare the tracker's hole count with a flood fill of the final
    complement and, for d = 2, with 1 - chi counted from scratch."""
    cells = state.cells()
    _, holes = complement_components(cells)
    res = {"tracked": cm.n_holes, "flood_fill": len(holes)}
    if state.d == 2:
        res["one_minus_chi"] = 1 - euler_characteristic(Polyomino(frozenset(cells), 2))
    if len(set(res.values())) != 1:
        raise CheckFailed(f"hole count mismatch: {res}")
    return res


def _worker(args):
    cfg, seed, root = args
    return run_seed(cfg, seed, root)


def run(cfg: RunConfig) -> Path:
    cfg.validate()
    root = cfg.out_path()
    try:
        root.mkdir(parents=True, exist_ok=True)
        probe = root / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as e:
        raise OSError(f"cannot write to {root}: {e}") from e
    jobs = [(cfg, s, root) for s in cfg.seeds]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            results = list(ex.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]
    manifest = {
        "config": cfg.manifest_dict(),
        "mode": mode_to_dict(mode_from_name(cfg.mode, cfg.mean)),
        "version": __version__,
        "rng": RNG_NAME,
        "seeds": {str(r["seed"]): r for r in results},
    }
    fmt.dump_json(root / "manifest.json", manifest)
    return root


def config_from_manifest(path: Path, out_dir: str | None = None) -> RunConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    cfg = RunConfig(**data["config"])
    cfg.out_dir = out_dir
    return cfg


def load_manifest(root: Path) -> dict:
    p = Path(root) / "manifest.json"
    if not p.exists():
        raise FileNotFoundError(f"{p} not found (is this a run directory?)")
    return json.loads(p.read_text(encoding="utf-8"))


# --- aggregation over a finished run ------------------------------------

def seed_dirs(root: Path) -> list[tuple[int, Path]]:
    man = load_manifest(root)
    return [(int(s), seed_dir(Path(root), int(s))) for s in sorted(man["seeds"], key=int)]


def _need(path: Path) -> Path:
    if not path.exists():
        raise FileNotFoundError(f"{path} not found (run without hole tracking?)")
    return path


def area_table(root: Path) -> list[tuple[str, int, float, float, int]]:
    """Rows (mode, area, mean frequency over seeds, sample SD, pooled count);
    area 6 stands for >= 6."""
    per_mode: dict[str, list[Counter]] = {"birth": [], "snapshot": []}
    for _, sd in seed_dirs(root):
        per_mode["birth"].append(Counter(min(int(r["volume"]), AREA_CAP) for r in fmt.read_rows(_need(sd / "creations.csv"))))
        per_mode["snapshot"].append(Counter(min(int(r["volume"]), AREA_CAP) for r in fmt.read_rows(_need(sd / "holes_alive.csv"))))
    rows = []
    for mode, counters in per_mode.items():
        for a in range(1, AREA_CAP + 1):
            fr = [c[a] / sum(c.values()) for c in counters if c]
            if not fr:
                continue
            m, s = mean_sd(fr)
            rows.append((mode, a, m, s, sum(c[a] for c in counters)))
    return rows


def shape_table(root: Path, areas=(3, 4)) -> list[tuple]:
    """Rows (mode, area, free key, mean frequency, SD, fixed multiplicity, mean / multiplicity)."""
    rows = []
    for mode, fname in (("birth", "creations.csv"), ("snapshot", "holes_alive.csv")):
        per_seed = []
        for _, sd in seed_dirs(root):
            per_seed.append(fmt.read_rows(_need(sd / fname)))
        for a in areas:
            counters = [Counter(r["shape_free"] for r in rs if int(r["volume"]) == a) for rs in per_seed]
            keys = sorted(set().union(*counters))
            for k in keys:
                fr = [c[k] / sum(c.values()) for c in counters if c]
                m, s = mean_sd(fr)
                mult = fixed_multiplicity(cells_from_key(k))
                rows.append((mode, a, k, m, s, mult, m / mult))
    return rows


def series_of(sd: Path, name: str) -> TimeSeries:
    cols = fmt.read_series(_need(sd / "series.csv"))
    if name == "OutP/P":
        return TimeSeries(cols["t"], [o / p for o, p in zip(cols["OutP"], cols["P"])], name)
    if name not in cols:
        raise KeyError(f"unknown series {name!r}; have {sorted(cols)}")
    if any(v is None for v in cols[name]):
        raise KeyError(f"series {name!r} was not tracked")
    return TimeSeries(cols["t"], cols[name], name)


def fit_table(root: Path, name: str, window=(1e4, None)) -> list[tuple[str, PowerLawFit]]:
    out = []
    for seed, sd in seed_dirs(root):
        out.append((f"{name}:seed={seed}", fit_power_law(series_of(sd, name), window)))
    return out


def run_barcode(root: Path, seed: int) -> list:
    sd = seed_dir(Path(root), seed)
    if (sd / "barcode.csv").exists():
        return fmt.read_barcode(sd / "barcode.csv")
    return fmt.read_barcode(_need(sd / "barcode_top.csv"))


def jump_table(root: Path, bin_width: int = 50_000) -> list[tuple[int, int, int, int, int]]:
    """Rows (seed, i, delta, bin, count) from the event logs."""
    rows = []
    for seed, sd in seed_dirs(root):
        d, cells, db, events = fmt.read_events(_need(sd / "events.csv"))
        t = len(cells)
        for i, vals in sorted(db.items()):
            hist: Counter = Counter()
            for k, v in enumerate(vals):
                hist[(v, (k + 1) // bin_width)] += 1
            for (v, b), c in sorted(hist.items()):
                rows.append((seed, i, v, b, c))
    return rows
