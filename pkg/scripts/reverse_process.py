"""Shrink the largest hole of a 2D run cell by cell and report its splits.

    python3 scripts/reverse_process.py --steps 200000
"""
import argparse

from edentopo.growth import reverse_process, simulate
from edentopo.holetrack import ComplementMap, barcode_dminus1
from edentopo.lattice import Polyomino
from edentopo.stats import largest_hole


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--reps", type=int, default=5)
    a = ap.parse_args()
    cm = ComplementMap(2)
    simulate(2, a.steps, a.seed, hooks=[cm])
    big = largest_hole(cm.records.values())
    hole = Polyomino.of(cm.records[big.birth_id].cells)
    print(f"largest hole: id {big.birth_id}, volume {len(hole)}")
    print(hole.to_text(), end="")
    for r in range(a.reps):
        tree = reverse_process(hole, r).extra["split_tree"]
        splits = sum(len(n.splits) for n in tree.nodes.values())
        bars = sorted(barcode_dminus1(tree, 2), key=lambda iv: iv.birth)
        print(f"rep {r}: {len(tree.nodes)} fragments, {splits} splits, "
              f"intervals {[(iv.birth, iv.death) for iv in bars]}")


if __name__ == "__main__":
    main()
