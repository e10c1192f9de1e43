#!/usr/bin/env python3
"""Tabulate 2 pi/n-periodic radial solutions for n = 1..N.

For each n the periodicity condition is solved by Brent's method, then the
field is checked for smoothness across the ray and against the PDE on an
annular grid.  Usage: python3 scripts/global_solutions.py [N]
"""
import math
import sys

import numpy as np

from jhflow import radial
from jhflow import verify as V


def annulus_residual(sol, nr=11, nt=21):
    fe = V.FieldEvaluator.radial(sol.spec, extended=True)
    worst = 0.0
    for r in np.linspace(0.5, 2.0, nr):
        for th in np.linspace(0.0, 2 * math.pi, nt, endpoint=False):
            worst = max(worst, V.pde_residual(fe, r * math.cos(th), r * math.sin(th)).max_normalized)
    return worst


def main(nmax: int = 4) -> None:
    head = f"{'n':>2} {'C1':>10} {'C2':>12} {'a':>10} {'b':>10} {'c':>10} {'k':>7} " \
           f"{'4+flux/pi':>10} {'cond':>8} {'smooth':>8} {'pde':>8}"
    print(head)
    for n in range(1, nmax + 1):
        sol = radial.global_periodic_solve(n)
        k = math.sqrt((sol.c - sol.b) / (sol.c - sol.a))
        mism, scale = V.smoothness_across_ray(sol, 3, with_scale=True)
        smooth = max(m / s for m, s in zip(mism, scale))
        print(f"{n:>2} {sol.source.C1:>10.4f} {sol.source.C2:>12.4f} {sol.a:>10.5f} "
              f"{sol.b:>10.5f} {sol.c:>10.5f} {k:>7.4f} {4 + sol.flux / math.pi:>10.4f} "
              f"{abs(sol.condition_residual):>8.1e} {smooth:>8.1e} {annulus_residual(sol):>8.1e}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4)
