"""Per-step Betti jump frequencies in bins of steps.

    python3 scripts/jump_frequencies.py --dim 3 --steps 300000 --bin-width 50000
"""
import argparse

from edentopo.census import jump_bounds, jump_histogram_from_events
from edentopo.growth import simulate
from edentopo.holetrack import ComplementMap


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--steps", type=int, default=300_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bin-width", type=int, default=50_000)
    a = ap.parse_args()
    tr = simulate(a.dim, a.steps, a.seed, hooks=[ComplementMap(a.dim, shapes=False)])
    h = jump_histogram_from_events(tr, a.bin_width)
    for i in sorted({i for i, _ in h.counts}):
        jb = jump_bounds(a.dim, i)
        print(f"beta_{i} (bounds [{jb.lo}, {jb.hi}]):")
        for dl, fr in sorted(h.frequencies(i).items()):
            if dl:
                print(f"  delta {dl:+d}: " + " ".join(f"{x:.5f}" for x in fr))


if __name__ == "__main__":
    main()
