"""Command-line entry point: single solves and convergence studies."""
from __future__ import annotations

import argparse
import sys
import warnings
from typing import List, Optional

from .errors import SolverError
from .harness import (
    convergence_table,
    format_table,
    parse_zones,
    write_diagnostics_csv,
    write_field2d_csv,
    write_field_csv,
    write_table_csv,
)
from .problems import PROBLEM_IDS, get_problem
from .solver import SolverConfig, solve_1d, solve_2d

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    pass


def _int_list(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty mesh list")
    return values


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="elrkfv",
        description="Forward Eulerian-Lagrangian RK finite volume solver for Burgers and linear advection.",
    )
    p.add_argument("--problem", required=True, choices=PROBLEM_IDS)
    p.add_argument("--nx", type=int, default=100, help="cells along x (default 100)")
    p.add_argument("--ny", type=int, default=None, help="cells along y for 2D problems (default nx)")
    p.add_argument("--cfl", type=float, default=None, help="dt = cfl*dx/max|f'(u)| (default 1)")
    p.add_argument("--tfinal", type=float, default=None, help="final time (default per problem)")
    p.add_argument("--rk", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--recon", choices=("eno3", "wenoao3", "const"), default="eno3")
    p.add_argument("--quadrants", type=_float_list, default=None, help="a,b,c,d for riemann_2d")
    p.add_argument("--convergence", type=_int_list, default=None, metavar="N1,N2,...")
    p.add_argument("--exclude", type=str, default="", metavar="lo,hi[;lo,hi]", help="zones left out of the L1 error")
    p.add_argument("--lambda", dest="lambda_mode", choices=("global", "local"), default="global")
    p.add_argument("--strict-dt", action="store_true", help="fail instead of clamping dt when shocks are present")
    p.add_argument("--out", type=str, default=None, help="CSV for the solution or convergence table")
    p.add_argument("--diagnostics", type=str, default=None, help="CSV with per-step TV, mass and merge count")
    return p


def _run(args) -> None:
    if args.nx <= 0 or (args.ny is not None and args.ny <= 0):
        raise _UsageError("mesh sizes must be positive")
    if args.cfl is not None and not args.cfl > 0:
        raise _UsageError("--cfl must be positive")
    if args.tfinal is not None and args.tfinal < 0:
        raise _UsageError("--tfinal must be non-negative")
    try:
        zones = parse_zones(args.exclude)
    except ValueError as exc:
        raise _UsageError(str(exc))
    if args.quadrants is not None and (args.problem != "riemann_2d" or len(args.quadrants) != 4):
        raise _UsageError("--quadrants takes four values and only applies to riemann_2d")
    spec = get_problem(args.problem, args.quadrants)
    config = SolverConfig(
        rk=args.rk,
        recon=args.recon,
        lambda_mode=args.lambda_mode,
        strict_dt=args.strict_dt,
        **({} if args.cfl is None else {"cfl": args.cfl}),
    )

    if args.convergence is not None:
        if spec.dim != 1 or not spec.has_exact:
            raise _UsageError(f"convergence studies need a 1D problem with an exact solution, not {spec.id}")
        t_final = spec.default_t_final if args.tfinal is None else args.tfinal
        try:
            rows = convergence_table(spec, args.convergence, config.cfl, t_final, config, zones)
        except ValueError as exc:
            raise _UsageError(str(exc))
        print(format_table(rows))
        if args.out:
            write_table_csv(args.out, rows)
        return

    if spec.dim == 1:
        out, diag = solve_1d(spec, args.nx, None, args.tfinal, config)
        if args.out:
            write_field_csv(args.out, out)
    else:
        out, diag = solve_2d(spec, args.nx, args.ny or args.nx, None, args.tfinal, config, args.quadrants)
        if args.out:
            write_field2d_csv(args.out, out)
    if args.diagnostics:
        write_diagnostics_csv(args.diagnostics, diag)
    print(f"{spec.id}: {len(diag.times) - 1} steps, dt={diag.dt:.6g}, mass={diag.mass[-1]:.12g}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            _run(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"elrkfv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"elrkfv: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
