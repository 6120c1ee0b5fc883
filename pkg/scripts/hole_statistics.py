"""Hole area and shape frequencies, over all time and at the final step.

    python3 scripts/hole_statistics.py --steps 1000000 --seeds 10
"""
import argparse

import numpy as np

from edentopo.growth import simulate
from edentopo.holetrack import ComplementMap, cells_from_key
from edentopo.stats import hole_area_distribution, largest_hole, shape_distribution


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--seeds", type=int, default=10)
    a = ap.parse_args()
    births, snaps, shapes, big = [], [], {3: [], 4: []}, []
    for s in range(a.seeds):
        cm = ComplementMap(2)
        simulate(2, a.steps, s, hooks=[cm])
        cm.finalize()
        recs = list(cm.records.values())
        births.append(hole_area_distribution(recs))
        snaps.append(hole_area_distribution(recs, at=a.steps))
        for area in (3, 4):
            shapes[area].append({k: f.frequency for k, f in shape_distribution(recs, area).items()})
        big.append(largest_hole(recs, a.steps))
        print(f"seed {s}: {len(recs)} hole records, largest created {big[-1].birth_volume}, "
              f"largest alive {big[-1].alive_volume}")
    for name, rows in (("over all time", births), (f"at t={a.steps}", snaps)):
        cols = "  ".join(f"{np.mean([r.get(k, 0) for r in rows]):.3f}" for k in range(1, 7))
        print(f"areas 1..5, >=6 {name}: {cols}")
    for area, rows in shapes.items():
        keys = sorted({k for r in rows for k in r})
        for k in keys:
            vals = [r.get(k, 0.0) for r in rows]
            print(f"area {area} shape {cells_from_key(k)}: {np.mean(vals):.3f} (sd {np.std(vals, ddof=1):.3f})")


if __name__ == "__main__":
    main()
