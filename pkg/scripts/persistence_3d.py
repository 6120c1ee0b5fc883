"""Normalized persistence (death - birth) / birth^(2/3) on one 3D run.

Compares two disjoint birth windows and the PH_1 / PH_2 tails.

    python3 scripts/persistence_3d.py --steps 200000
"""
import argparse

from edentopo.growth import simulate
from edentopo.homology import build_filtration, persistence
from edentopo.stats import normalized_persistence, total_variation


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    t = a.steps
    ivs = persistence(build_filtration(simulate(3, t, a.seed)))
    w1, w2 = (t // 2, 3 * t // 4), (3 * t // 4, t)
    for h in (1, 2):
        h1 = normalized_persistence(ivs, w1, 3, hdim=h)
        h2 = normalized_persistence(ivs, w2, 3, hdim=h)
        print(f"PH_{h}: windows {w1} and {w2}: n={h1.n}/{h2.n}, open {h1.n_open}/{h2.n_open}, "
              f"TV distance {total_variation(h1, h2):.3f}, 90th pct {h1.quantile(0.9):.3f}/{h2.quantile(0.9):.3f}")


if __name__ == "__main__":
    main()
