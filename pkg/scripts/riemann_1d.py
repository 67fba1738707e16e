"""1D Riemann problems: the (4|0) shock with dt = dx and the (-2|2) rarefaction with dt = 1.6 dx.

Writes solution CSVs (x,u) plus the exact cell averages and prints the shock position.
"""
import argparse
import pathlib

import numpy as np

from elrkfv.characteristics import BURGERS
from elrkfv.harness import l1_error, write_field_csv
from elrkfv.problems import get_problem
from elrkfv.solver import SolverConfig, evolve_1d
from elrkfv.troubled import Bounds

CASES = {"riemann_shock_1d": (1.0, Bounds(4.0, 0.0)), "riemann_rarefaction_1d": (1.6, Bounds(2.0, -2.0))}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--tfinal", type=float, default=1.2)
    p.add_argument("--rk", type=int, default=3)
    p.add_argument("--recon", default="eno3")
    p.add_argument("--final-step", default="truncate", choices=("truncate", "uniform"))
    p.add_argument("--outdir", default="results")
    args = p.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = SolverConfig(rk=args.rk, recon=args.recon, final_step=args.final_step)
    for problem, (ratio, bounds) in CASES.items():
        spec = get_problem(problem)
        field = spec.initial_field(args.n)
        out, diag = evolve_1d(field, args.tfinal, ratio * field.grid.dx, cfg, BURGERS, bounds)
        exact = spec.exact_averages(out.grid, args.tfinal)
        write_field_csv(outdir / f"{problem}.csv", out)
        write_field_csv(outdir / f"{problem}_exact.csv", out.with_values(exact))
        j = int(np.argmax(np.abs(np.diff(out.values))))
        print(
            f"{problem}: L1 {l1_error(out, exact):.3e}, range [{out.values.min():.3g}, {out.values.max():.6g}], "
            f"max jump at x={out.grid.x_lo + (j + 1) * out.grid.dx:.4f}, merges/step {np.mean(diag.merge_count[1:]):.2f}"
        )


if __name__ == "__main__":
    main()
