"""Betti number growth and power-law fits from the hole tracker.

For d = 3 beta_1 comes from the Euler characteristic; pass --reduction to
also compute it by matrix reduction and compare.

    python3 scripts/betti_growth.py --dim 3 --steps 200000 --reduction
"""
import argparse

import numpy as np

from edentopo.growth import simulate
from edentopo.holetrack import ComplementMap
from edentopo.homology import betti_series, build_filtration, persistence
from edentopo.stats import SeriesRecorder, TimeSeries, default_checkpoints, fit_power_law


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tmin", type=float, default=1e4)
    ap.add_argument("--reduction", action="store_true")
    a = ap.parse_args()
    d = a.dim
    cm = ComplementMap(d, shapes=False)
    rec = SeriesRecorder(cm, default_checkpoints(a.steps))
    tr = simulate(d, a.steps, a.seed, hooks=[cm, rec])
    tracked = [i for i in range(1, d) if rec.rows[-1][4][i - 1] is not None]
    for i in tracked:
        s = rec.series(f"beta_{i}")
        f = fit_power_law(s, (a.tmin, None))
        print(f"beta_{i}: exponent {f.exponent:.4f} coefficient {f.coefficient:.4f} "
              f"beta/t^((d-1)/d) at end {s.values[-1] / a.steps ** ((d - 1) / d):.4f}")
    if a.reduction:
        ivs = persistence(build_filtration(tr))
        ser = betti_series(ivs, a.steps, d)
        cps = [r[0] for r in rec.rows]
        for i in range(1, d):
            vals = np.array([ser[c - 1][i] for c in cps])
            f = fit_power_law(TimeSeries(cps, vals), (a.tmin, None))
            same = i in tracked and np.array_equal(vals, rec.series(f"beta_{i}").values)
            print(f"beta_{i} (reduction): exponent {f.exponent:.4f} coefficient {f.coefficient:.4f}"
                  + (" matches tracker" if same else ""))


if __name__ == "__main__":
    main()
