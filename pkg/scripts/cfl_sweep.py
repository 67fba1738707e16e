"""L1 error against CFL number at a fixed mesh (varcoeff to T=0.5, Burgers pre/post shock).

Prints CSV rows: case,rk,recon,cfl,l1
"""
import argparse

import numpy as np

from elrkfv.harness import l1_error
from elrkfv.problems import get_problem
from elrkfv.solver import SolverConfig, solve_1d
from elrkfv.errors import SolverError

CASES = {
    "varcoeff": ("varcoeff_1d", 0.5, (), np.geomspace(0.01, 10, 13)),
    "preshock": ("burgers_sin_1d", 0.5, (), np.geomspace(0.01, 30, 14)),
    "postshock": ("burgers_sin_1d", 1.3, ((np.pi - 0.1, np.pi + 0.1),), np.linspace(0.1, 3.5, 18)),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--case", choices=sorted(CASES), action="append")
    args = p.parse_args()
    print("case,rk,recon,cfl,l1")
    for name in args.case or sorted(CASES):
        problem, t_final, excluded, cfls = CASES[name]
        spec = get_problem(problem)
        for recon in ("eno3", "wenoao3"):
            for rk in (1, 2, 3):
                for cfl in cfls:
                    try:
                        out, _ = solve_1d(spec, args.n, float(cfl), t_final, SolverConfig(rk=rk, recon=recon))
                        err = l1_error(out, spec.exact_averages(out.grid, t_final), excluded, normalize=True)
                    except SolverError:
                        err = float("nan")
                    print(f"{name},{rk},{recon},{cfl:.4g},{err:.6e}")


if __name__ == "__main__":
    main()
