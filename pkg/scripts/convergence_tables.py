"""Reproduce the three 1D convergence tables (varcoeff, pre- and post-shock Burgers).

Usage: python3 scripts/convergence_tables.py [--meshes 100,200,300,400] [--outdir results]
"""
import argparse
import pathlib

import numpy as np

from elrkfv.harness import convergence_table, format_table, write_table_csv
from elrkfv.solver import SolverConfig

CASES = [
    ("varcoeff", "varcoeff_1d", 3.2, 1.0, ()),
    ("burgers_preshock", "burgers_sin_1d", 3.2, 0.5, ()),
    ("burgers_postshock", "burgers_sin_1d", 1.95, 1.3, ((np.pi - 0.1, np.pi + 0.1),)),
]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--meshes", default="100,200,300,400")
    p.add_argument("--outdir", default=None)
    args = p.parse_args()
    meshes = [int(v) for v in args.meshes.split(",")]
    outdir = pathlib.Path(args.outdir) if args.outdir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    for name, problem, cfl, t_final, excluded in CASES:
        for recon in ("wenoao3", "eno3"):
            for rk in (1, 2, 3):
                rows = convergence_table(problem, meshes, cfl, t_final, SolverConfig(rk=rk, recon=recon), excluded)
                print(f"\n{name}  RK{rk} + {recon}  (CFL {cfl}, T {t_final})")
                print(format_table(rows))
                if outdir:
                    write_table_csv(outdir / f"{name}_rk{rk}_{recon}.csv", rows)


if __name__ == "__main__":
    main()
