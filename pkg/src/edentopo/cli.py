"""Command-line entry point: ``edentopo <command> ...``.

Exit codes: 0 success, 2 invalid configuration or input, 3 I/O failure,
4 resource budget exceeded, 5 an internal consistency check failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats as fmt
from . import runner
from .census import LocalPattern, handle_pattern, jump_config, pattern_census
from .growth import SimulationError
from .holetrack import cells_from_key, hole_mesh_obj
from .homology import betti
from .lattice import CoordinateOverflow, LatticeError, Polyomino, parse_polyomino
from .stats import normalized_persistence

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_BUDGET, EXIT_CHECK = 0, 2, 3, 4, 5


def _seed_or_first(root: Path, seed: int | None) -> int:
    seeds = [s for s, _ in runner.seed_dirs(root)]
    if seed is None:
        return seeds[0]
    if seed not in seeds:
        raise runner.ConfigError(f"seed {seed} is not part of run {root} (have {seeds})")
    return seed


def _window(text: str) -> tuple[float, float | None]:
    lo, _, hi = text.partition(",")
    return float(lo), (float(hi) if hi else None)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- commands -----------------------------------------------------------

def cmd_simulate(a) -> int:
    if a.from_manifest:
        cfg = runner.config_from_manifest(Path(a.from_manifest), a.out)
        cfg.workers = a.workers
    else:
        seeds = list(range(a.seed, a.seed + a.seeds))
        cfg = runner.RunConfig(
            d=a.dim, t_max=a.steps, seeds=seeds, mode=a.mode, mean=a.mean,
            snapshot_every=a.snapshot_every, series_every=a.series_every, holes=not a.no_holes,
            full_ph=a.full_ph, ph_budget=a.ph_budget, patterns=a.pattern or [], rotations=a.rotations,
            check=a.check, workers=a.workers, out_dir=a.out,
        )
    root = runner.run(cfg)
    man = runner.load_manifest(root)
    for s, summ in man["seeds"].items():
        extra = ""
        if "OutP" in summ:
            extra = f" OutP/P={summ['OutP'] / summ['P']:.4f} holes={summ['holes_alive']}"
        if "check" in summ:
            extra += " check=ok"
        print(f"seed {s}: t={summ['t']} P={summ['P']}{extra}")
    print(f"wrote {root}")
    return EXIT_OK


def cmd_oracle(a) -> int:
    text = Path(a.input).read_text(encoding="utf-8")
    poly, _ = parse_polyomino(text.splitlines())
    print(" ".join(map(str, betti(poly))))
    return EXIT_OK


def cmd_census(a) -> int:
    if a.census_cmd == "handle":
        _emit(handle_pattern(a.dim, a.i).to_text(), a.out)
        return EXIT_OK
    root = Path(a.run)
    if a.census_cmd == "jumps":
        rows = runner.jump_table(root, a.bin_width)
        out = Path(a.out) if a.out else root / "jumps.csv"
        fmt.write_csv(out, ["seed", "i", "delta", "bin", "count"], rows)
        print(f"wrote {out}")
        return EXIT_OK
    pat = LocalPattern.from_text(Path(a.pattern).read_text(encoding="utf-8"))
    seed = _seed_or_first(root, a.seed)
    _, cells, _, _ = fmt.read_events(runner.seed_dir(root, seed) / "events.csv")
    for t in a.at or [len(cells)]:
        state = fmt.replay_cells(cells, t)
        print(f"t={t} count={pattern_census(state, pat, a.rotations)}")
    return EXIT_OK


def cmd_jumpcfg(a) -> int:
    cfg = jump_config(a.dim, a.i, a.k, a.part)
    _emit(cfg.polyomino.to_text(), a.out)
    # keep stdout a clean polyomino file when no --out is given
    rep = sys.stdout if a.out else sys.stderr

    def show(m):
        return " ".join(f"beta_{j}:{v:+d}" for j, v in sorted(m.items())) or "none"

    print(f"center {' '.join(map(str, cfg.center))}", file=rep)
    print(f"claimed {show(cfg.claimed)}", file=rep)
    print(f"measured {show(cfg.measured)}", file=rep)
    print("certified yes", file=rep)
    return EXIT_OK


def cmd_stats(a) -> int:
    root = Path(a.run)
    out_dir = Path(a.out) if a.out else root
    if a.stats_cmd == "fit":
        fits = runner.fit_table(root, a.series, (a.tmin, a.tmax))
        rows = [(lab, f.exponent, f.coefficient, f.t_min, f.t_max, f.residual) for lab, f in fits]
        fmt.write_csv(out_dir / "fits.csv", ["series", "exponent", "coefficient", "tmin", "tmax", "residual"], rows)
        for lab, f in fits:
            print(f"{lab} exponent={f.exponent:.4f} coefficient={f.coefficient:.4f} window=[{f.t_min},{f.t_max}]")
    elif a.stats_cmd == "areas":
        rows = runner.area_table(root)
        fmt.write_csv(out_dir / "areas.csv", ["mode", "area", "mean", "sd", "count"], rows)
        for r in rows:
            print(f"{r[0]} area={'>=6' if r[1] == 6 else r[1]} mean={r[2]:.4f} sd={r[3]:.4f}")
    elif a.stats_cmd == "shapes":
        rows = runner.shape_table(root, tuple(int(x) for x in a.areas.split(",")))
        fmt.write_csv(out_dir / "shapes.csv",
                      ["mode", "area", "shape_free", "mean", "sd", "multiplicity", "mean_per_fixed"], rows)
        for r in rows:
            print(f"{r[0]} area={r[1]} {r[2]} mean={r[3]:.4f} F/R={r[6]:.4f}")
    elif a.stats_cmd == "normpers":
        seed = _seed_or_first(root, a.seed)
        d = runner.load_manifest(root)["config"]["d"]
        lo, hi = _window(a.window)
        h = normalized_persistence(runner.run_barcode(root, seed), (int(lo), int(hi or 10 ** 18)), d,
                                   a.hdim, a.bin_width)
        rows = [(a.hdim, f"{h.edges[i]:g}", f"{h.edges[i + 1]:g}", int(c)) for i, c in enumerate(h.counts)]
        fmt.write_csv(out_dir / "normpers.csv", ["hdim", "bin_lo", "bin_hi", "count"], rows)
        print(f"{h.n} closed intervals binned, {h.n_open} open intervals excluded")
    return EXIT_OK


def cmd_export(a) -> int:
    root = Path(a.run)
    seed = _seed_or_first(root, a.seed)
    sd = runner.seed_dir(root, seed)
    if a.export_cmd == "obj":
        holes = {h["id"]: h for h in fmt.read_holes(sd / "holes.csv")}
        if a.hole not in holes:
            raise runner.ConfigError(f"no hole with id {a.hole}")
        _emit(hole_mesh_obj(cells_from_key(holes[a.hole]["shape_fixed"])), a.out)
        return EXIT_OK
    _, cells, _, _ = fmt.read_events(sd / "events.csv")
    t = a.at or len(cells)
    if a.export_cmd == "cubical":
        _emit(fmt.cubical_text(cells, t), a.out)
    else:
        _emit(Polyomino.of(cells[:t]).to_text(), a.out)
    return EXIT_OK


# --- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="edentopo", description="Eden growth with topological bookkeeping.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simulate", help="grow clusters and write a run directory")
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0, help="first seed")
    s.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    s.add_argument("--mode", choices=["eden", "site_fpp", "bond_fpp"], default="eden")
    s.add_argument("--mean", type=float, default=1.0, help="mean passage time (FPP modes)")
    s.add_argument("--snapshot-every", type=int)
    s.add_argument("--series-every", type=int)
    s.add_argument("--no-holes", action="store_true")
    s.add_argument("--full-ph", action="store_true", help="persistence by matrix reduction")
    s.add_argument("--ph-budget", type=int, default=runner.DEFAULT_PH_BUDGET)
    s.add_argument("--pattern", action="append", help="pattern file counted at each snapshot")
    s.add_argument("--rotations", action="store_true")
    s.add_argument("--check", action="store_true", help="verify final hole count independently")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help=f"output directory (default ${runner.OUT_DIR_ENV})")
    s.add_argument("--from-manifest", help="rerun the configuration stored in a manifest")
    s.set_defaults(func=cmd_simulate)

    o = sub.add_parser("oracle", help="Betti numbers of a polyomino file")
    o.add_argument("input")
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("census", help="local pattern counts and jump histograms")
    csub = c.add_subparsers(dest="census_cmd", required=True)
    cc = csub.add_parser("count")
    cc.add_argument("--run", required=True)
    cc.add_argument("--seed", type=int)
    cc.add_argument("--pattern", required=True)
    cc.add_argument("--at", type=int, action="append")
    cc.add_argument("--rotations", action="store_true")
    ch = csub.add_parser("handle")
    ch.add_argument("--dim", type=int, required=True)
    ch.add_argument("--i", type=int, default=1)
    ch.add_argument("--out")
    cj = csub.add_parser("jumps")
    cj.add_argument("--run", required=True)
    cj.add_argument("--bin-width", type=int, default=50_000)
    cj.add_argument("--out")
    c.set_defaults(func=cmd_census)

    j = sub.add_parser("jumpcfg", help="certified extremal Betti-jump configuration")
    j.add_argument("--dim", type=int, required=True)
    j.add_argument("--i", type=int, default=1)
    j.add_argument("--k", type=int, required=True)
    j.add_argument("--part", choices=["a", "b"], required=True)
    j.add_argument("--out")
    j.set_defaults(func=cmd_jumpcfg)

    st = sub.add_parser("stats", help="aggregate statistics of a run directory")
    ssub = st.add_subparsers(dest="stats_cmd", required=True)
    for name in ("fit", "areas", "shapes", "normpers"):
        sp = ssub.add_parser(name)
        sp.add_argument("--run", required=True)
        sp.add_argument("--out", help="directory for the CSV (default: the run directory)")
        if name == "fit":
            sp.add_argument("--series", default="beta_1")
            sp.add_argument("--tmin", type=float, default=1e4)
            sp.add_argument("--tmax", type=float)
        if name == "shapes":
            sp.add_argument("--areas", default="3,4")
        if name == "normpers":
            sp.add_argument("--seed", type=int)
            sp.add_argument("--hdim", type=int, default=1)
            sp.add_argument("--window", default="1,", help="birth window lo,hi")
            sp.add_argument("--bin-width", type=float, default=0.25)
    st.set_defaults(func=cmd_stats)

    e = sub.add_parser("export", help="cubical complex, polyomino or hole mesh files")
    esub = e.add_subparsers(dest="export_cmd", required=True)
    for name in ("cubical", "polyomino", "obj"):
        ep = esub.add_parser(name)
        ep.add_argument("--run", required=True)
        ep.add_argument("--seed", type=int)
        ep.add_argument("--out")
        if name == "obj":
            ep.add_argument("--hole", type=int, required=True)
        else:
            ep.add_argument("--at", type=int)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (runner.BudgetError, SimulationError, CoordinateOverflow) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (runner.ConfigError, LatticeError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except AssertionError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
