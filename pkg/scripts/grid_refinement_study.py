#!/usr/bin/env python3
"""Refinement study of the grid validator on the slit disk.

Prints the discrete minimum against the exact constant (~0.205358) for a
sequence of lattice sizes, exhibiting the 1/log^2(1/h) approach from above
that limits what nodal finite differences can certify.

Example:
  python scripts/grid_refinement_study.py --sizes 33 65 129 257
"""

import argparse
import math
import sys
import time

from hardyconst import Sector, build_grid, estimate_constant, solve_c_beta

PI = math.pi


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[33, 65, 129, 257])
    ap.add_argument("--beta", type=float, default=2.0, help="opening angle in pi units")
    args = ap.parse_args()

    beta = args.beta * PI
    exact = solve_c_beta(beta).c
    print(f"opening {args.beta} pi, exact constant {exact:.6f}")
    print(f"{'n':>6s} {'nodes':>8s} {'lambda':>10s} {'excess':>10s} {'seconds':>8s}")
    for n in args.sizes:
        t0 = time.perf_counter()
        grid = build_grid(Sector(beta), n)
        est = estimate_constant(grid)
        dt = time.perf_counter() - t0
        print(
            f"{n:6d} {grid.interior_count:8d} {est.lam:10.5f} "
            f"{est.lam - exact:10.5f} {dt:8.1f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
