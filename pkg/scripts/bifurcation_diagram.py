#!/usr/bin/env python3
"""Region map of the (C1, C2) plane and the families it supports.

Writes a CSV of region labels on a grid plus the boundary curves
L+(C1), L-(C1), then prints the share of each region.
Usage: python3 scripts/bifurcation_diagram.py [out.csv]
"""
import collections
import csv
import sys

import numpy as np

from jhflow import cubic


def main(out: str = "region_map.csv", n: int = 201) -> None:
    c1 = np.linspace(-6.0, 6.0, n)
    c2 = np.linspace(-60.0, 30.0, n)
    counts = collections.Counter()
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["C1", "C2", "region", "L_plus", "L_minus"])
        for a in c1:
            lp, lm = cubic.boundary_curves(a)
            for b in c2:
                tag = cubic.classify(cubic.ParameterPoint(a, b))
                counts[tag.value] += 1
                w.writerow([f"{a:.6g}", f"{b:.6g}", tag.value, f"{lp:.10g}", f"{lm:.10g}"])
    total = sum(counts.values())
    for tag, cnt in sorted(counts.items()):
        print(f"{tag:>12}: {cnt:6d} ({100 * cnt / total:5.1f}%)")
    print(f"wrote {out}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
