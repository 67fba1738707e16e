"""Error metrics, convergence studies and CSV output."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .grid import CellAverageField
from .problems import EXACT_GAUSS_POINTS, ProblemSpec, get_problem
from .solver import Diagnostics, Diagnostics2D, Field2D, SolverConfig, solve_1d

Zone = Tuple[float, float]
DIGITS = 17


@dataclass(frozen=True)
class ErrorReport:
    """One row of a convergence study."""

    n: int
    l1: float
    order: Optional[float] = None
    excluded_zones: Tuple[Zone, ...] = field(default=())

    def __post_init__(self):
        if not self.l1 >= 0:
            raise ValueError(f"L1 error must be non-negative, got {self.l1}")


def parse_zones(text: str) -> Tuple[Zone, ...]:
    """Parse ``"lo,hi;lo,hi"`` into intervals."""
    zones = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise ValueError(f"zone {chunk!r} must be 'lo,hi'")
        lo, hi = (float(p) for p in parts)
        if not lo <= hi:
            raise ValueError(f"zone {chunk!r} has lo > hi")
        zones.append((lo, hi))
    return tuple(zones)


def included_cells(centers, zones: Sequence[Zone] = ()) -> np.ndarray:
    """Mask of cells whose centre lies outside every zone (closed intervals)."""
    centers = np.asarray(centers, dtype=float)
    keep = np.ones(centers.shape, dtype=bool)
    for lo, hi in zones:
        keep &= ~((centers >= lo) & (centers <= hi))
    return keep


def l1_error(
    field: CellAverageField,
    exact_averages,
    excluded: Sequence[Zone] = (),
    normalize: bool = False,
) -> float:
    """``sum dx |u_j - u_j^exact|`` over cells outside the excluded zones.

    With ``normalize`` the sum is divided by the domain length, giving the
    mean absolute error per cell used by the reference convergence tables.
    """
    exact = np.asarray(exact_averages, dtype=float)
    if exact.shape != field.values.shape:
        raise ValueError(f"expected {field.values.shape} exact averages, got {exact.shape}")
    keep = included_cells(field.grid.centers, excluded)
    err = float(field.grid.dx * np.abs(field.values - exact)[keep].sum())
    return err / field.grid.length if normalize else err


def observed_order(e_prev: float, e_next: float, n_prev: int, n_next: int) -> float:
    return math.log(e_prev / e_next) / math.log(n_next / n_prev)


def orders(ns: Sequence[int], errors: Sequence[float]) -> List[Optional[float]]:
    """Observed order per row; the first row has none."""
    if len(ns) != len(errors):
        raise ValueError("mesh list and error list differ in length")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("mesh list must be increasing")
    return [None] + [observed_order(errors[k - 1], errors[k], ns[k - 1], ns[k]) for k in range(1, len(ns))]


def convergence_table(
    problem: Union[str, ProblemSpec],
    meshes: Sequence[int],
    cfl: float,
    t_final: float,
    config: SolverConfig = SolverConfig(),
    excluded: Sequence[Zone] = (),
    normalize: bool = True,
    points: int = EXACT_GAUSS_POINTS,
) -> List[ErrorReport]:
    """Solve on every mesh and report L1 errors with observed orders."""
    spec = get_problem(problem) if isinstance(problem, str) else problem
    if not spec.has_exact:
        raise ValueError(f"{spec.id} has no exact solution")
    meshes = list(meshes)
    errors = []
    for n in meshes:
        out, _ = solve_1d(spec, n, cfl, t_final, config)
        errors.append(l1_error(out, spec.exact_averages(out.grid, t_final, points), excluded, normalize))
    return [
        ErrorReport(n, e, o, tuple(excluded)) for n, e, o in zip(meshes, errors, orders(meshes, errors))
    ]


def format_table(rows: Sequence[ErrorReport]) -> str:
    lines = [f"{'N':>6}  {'L1':>12}  {'order':>6}"]
    for r in rows:
        order = "" if r.order is None else f"{r.order:6.2f}"
        lines.append(f"{r.n:>6}  {r.l1:12.3e}  {order:>6}")
    return "\n".join(lines)


def _fmt(v) -> str:
    return f"{v:.{DIGITS}g}"


def _open(path):
    return open(path, "w", newline="")


def write_field_csv(path, field: CellAverageField) -> None:
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u"])
        for x, u in zip(field.grid.centers, field.values):
            w.writerow([_fmt(x), _fmt(u)])


def write_field2d_csv(path, field2d: Field2D) -> None:
    xs, ys = field2d.grid_x.centers, field2d.grid_y.centers
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "u"])
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                w.writerow([_fmt(x), _fmt(y), _fmt(field2d.values[i, j])])


def write_table_csv(path, rows: Sequence[ErrorReport]) -> None:
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(["N", "l1", "order"])
        for r in rows:
            w.writerow([r.n, _fmt(r.l1), "" if r.order is None else _fmt(r.order)])


def write_diagnostics_csv(path, diag: Union[Diagnostics, Diagnostics2D]) -> None:
    """Per-step time, total variation (1D only), mass and merge count."""
    tv = getattr(diag, "total_variation", None)
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(["step", "t", "tv", "mass", "merge_count"])
        for k, t in enumerate(diag.times):
            w.writerow([k, _fmt(t), "" if tv is None else _fmt(tv[k]), _fmt(diag.mass[k]), diag.merge_count[k]])
