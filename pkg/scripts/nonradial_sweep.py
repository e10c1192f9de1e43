#!/usr/bin/env python3
"""Pole-free windows and residuals of non-radial solutions over a (C0, g3) sweep.

For each parameter pair the principal pole-free window is located and the
Liénard residual, PDE residual and constraint xv - yu = C0 are measured
inside it.  Usage: python3 scripts/nonradial_sweep.py
"""
import numpy as np

from jhflow import nonradial as nr
from jhflow import verify as V


def main(seed: int = 7) -> None:
    rng = np.random.default_rng(seed)
    print(f"{'C0':>5} {'g3':>5} {'C':>5} {'window':>18} {'lienard':>8} {'pde':>8} {'constraint':>10}")
    for C0 in (-5.0, -3.0, 1.0, 3.0, 5.0):
        for g3 in (-1.0, 0.0, 1.0, 4.0):
            for C in (0.0, 0.3):
                spec = nr.NonRadialSpec.weierstrass(C0, g3, C)
                lo, hi = nr.principal_window(spec)
                w = hi - lo
                th = np.linspace(lo + 0.05 * w, hi - 0.05 * w, 101)
                lres = V.lienard_residual(spec, th, relative=True)
                fe = V.FieldEvaluator.nonradial(spec)
                t = rng.uniform(lo + 0.1 * w, hi - 0.1 * w, 30)
                r = rng.uniform(0.3, 3.0, 30)
                x, y = r * np.cos(t), r * np.sin(t)
                pde = max(V.pde_residual(fe, a, b).max_normalized for a, b in zip(x, y))
                cons = V.constraint_check(fe, C0, x, y)
                print(f"{C0:>5.1f} {g3:>5.1f} {C:>5.1f} [{lo:>7.4f}, {hi:>7.4f}] "
                      f"{lres:>8.1e} {pde:>8.1e} {cons:>10.1e}")


if __name__ == "__main__":
    main()
