"""Site perimeter and outer-perimeter fraction over several seeds.

    python3 scripts/perimeter_table.py --dim 2 --steps 100000 --seeds 10
"""
import argparse

from edentopo.growth import simulate
from edentopo.holetrack import ComplementMap
from edentopo.stats import mean_sd


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--steps", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, default=10)
    a = ap.parse_args()
    P, frac = [], []
    for s in range(a.seeds):
        cm = ComplementMap(a.dim, shapes=False)
        tr = simulate(a.dim, a.steps, s, hooks=[cm])
        out, inn = cm.perimeter_split(tr.extra["final_state"])
        P.append(out + inn)
        frac.append(out / (out + inn))
        print(f"seed {s}: P={out + inn} OutP={out} InnP={inn} OutP/P={frac[-1]:.4f}")
    (mp, sp), (mf, sf) = mean_sd(P), mean_sd(frac)
    print(f"mean P {mp:.1f} (sd {sp:.1f}); mean OutP/P {mf:.4f} (sd {sf:.4f})")


if __name__ == "__main__":
    main()
