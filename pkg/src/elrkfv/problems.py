"""Test-problem library: initial data, boundary conditions and exact solutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Optional, Tuple

import numpy as np

from .characteristics import BURGERS, FluxSpec
from .exact import exact_burgers_sin, exact_burgers_smooth, exact_riemann, exact_varcoeff
from .grid import CellAverageField, Dirichlet, Periodic, UniformGrid1D

PROBLEM_IDS = (
    "varcoeff_1d",
    "burgers_sin_1d",
    "burgers_1p2sin_1d",
    "riemann_shock_1d",
    "riemann_rarefaction_1d",
    "burgers_2d_sinbump",
    "riemann_2d",
)
INIT_GAUSS_POINTS = 8
EXACT_GAUSS_POINTS = 4


@dataclass(frozen=True)
class ProblemSpec:
    """A test case.

    ``domain`` is ``(x_lo, x_hi)`` in 1D and ``(x_lo, x_hi, y_lo, y_hi)`` in
    2D; ``bounds`` is ``(min u0, max u0)``.
    """

    id: str
    dim: int
    domain: Tuple[float, ...]
    periodic: bool
    u0: Callable
    bounds: Tuple[float, float]
    flux: FluxSpec = BURGERS
    max_speed: Optional[float] = None
    exact: Optional[Callable] = None
    quadrants: Optional[Tuple[float, float, float, float]] = None
    default_t_final: float = 1.0
    notes: str = field(default="", compare=False)

    def __post_init__(self):
        lo, hi = self.bounds
        if not lo <= hi:
            raise ValueError("bounds must be ordered (lower, upper)")
        d = self.domain
        if len(d) != 2 * self.dim or any(not d[2 * k + 1] > d[2 * k] for k in range(self.dim)):
            raise ValueError(f"malformed domain {d}")
        if self.quadrants is not None and not np.all(np.isfinite(self.quadrants)):
            raise ValueError("quadrant values must be finite")

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    @property
    def speed_bound(self) -> float:
        """Bound on ``|f'(u)|`` used to turn a CFL number into a time step."""
        if self.max_speed is not None:
            return self.max_speed
        return float(max(abs(self.bounds[0]), abs(self.bounds[1])))

    def grid(self, n_cells: int) -> UniformGrid1D:
        return UniformGrid1D(self.domain[0], self.domain[1], n_cells)

    def bc(self):
        if self.periodic:
            return Periodic()
        if self.dim == 1:
            x_lo, x_hi = self.domain
            return Dirichlet(float(self.u0(np.array(x_lo))), float(self.u0(np.array(x_hi))))
        return None

    def initial_field(self, n_cells: int) -> CellAverageField:
        if self.dim != 1:
            raise ValueError(f"{self.id} is two-dimensional")
        grid = self.grid(n_cells)
        return CellAverageField(grid, cell_averages(self.u0, grid, INIT_GAUSS_POINTS), self.bc())

    def initial_values_2d(self, nx: int, ny: int) -> np.ndarray:
        if self.dim != 2:
            raise ValueError(f"{self.id} is one-dimensional")
        gx = UniformGrid1D(self.domain[0], self.domain[1], nx)
        gy = UniformGrid1D(self.domain[2], self.domain[3], ny)
        return cell_averages_2d(self.u0, gx, gy, INIT_GAUSS_POINTS)

    def exact_averages(self, grid: UniformGrid1D, t: float, points: int = EXACT_GAUSS_POINTS) -> np.ndarray:
        if self.exact is None:
            raise ValueError(f"no exact solution for {self.id}")
        return cell_averages(partial(self.exact, t=t), grid, points)


def cell_averages(func, grid: UniformGrid1D, points: int) -> np.ndarray:
    xi, w = np.polynomial.legendre.leggauss(points)
    x = grid.centers[:, None] + 0.5 * grid.dx * xi[None, :]
    return 0.5 * np.sum(w[None, :] * func(x), axis=1)


def cell_averages_2d(func, gx: UniformGrid1D, gy: UniformGrid1D, points: int) -> np.ndarray:
    xi, w = np.polynomial.legendre.leggauss(points)
    x = gx.centers[:, None, None, None] + 0.5 * gx.dx * xi[None, None, :, None]
    y = gy.centers[None, :, None, None] + 0.5 * gy.dx * xi[None, None, None, :]
    vals = np.broadcast_to(func(x, y), np.broadcast_shapes(x.shape, y.shape))
    return 0.25 * np.einsum("ijkl,k,l->ij", vals, w, w)


def _sin(x):
    return np.sin(x)


def _one_plus_two_sin(x):
    return 1.0 + 2.0 * np.sin(x)


def _two_cos(x):
    return 2.0 * np.cos(x)


def _exact_1p2sin(x, t):
    if t >= 0.5:
        raise ValueError("no closed-form reference after the shock forms (t >= 0.5)")
    return exact_burgers_smooth(x, t, _one_plus_two_sin, _two_cos, (-1.0, 3.0))


def _unit(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _step(x, left, right):
    return np.where(np.asarray(x) <= 0, left, right)


def _sinbump(x, y):
    inside = (x >= 0) & (x <= 1) & (y >= 0) & (y <= 1)
    return np.where(inside, np.sin(np.pi * x) ** 2 * np.sin(np.pi * y) ** 2, 0.0)


def _quadrant_data(x, y, q):
    a, b, c, d = q
    return np.where(y > 0, np.where(x > 0, a, b), np.where(x > 0, d, c))


VARCOEFF_FLUX = FluxSpec.linear(_sin)


def get_problem(problem_id: str, quadrants=None) -> ProblemSpec:
    two_pi = 2 * np.pi
    if problem_id == "varcoeff_1d":
        return ProblemSpec(
            problem_id, 1, (0.0, two_pi), True, _unit, (1.0, 1.0),
            flux=VARCOEFF_FLUX, max_speed=1.0, exact=exact_varcoeff,
        )
    if problem_id == "burgers_sin_1d":
        return ProblemSpec(
            problem_id, 1, (0.0, two_pi), True, _sin, (-1.0, 1.0), exact=exact_burgers_sin,
            default_t_final=0.5,
        )
    if problem_id == "burgers_1p2sin_1d":
        return ProblemSpec(
            problem_id, 1, (0.0, two_pi), True, _one_plus_two_sin, (-1.0, 3.0), exact=_exact_1p2sin,
            default_t_final=1.3,
        )
    if problem_id == "riemann_shock_1d":
        return ProblemSpec(
            problem_id, 1, (-np.pi, np.pi), False, partial(_step, left=4.0, right=0.0), (0.0, 4.0),
            exact=partial(exact_riemann, left=4.0, right=0.0), default_t_final=1.2,
        )
    if problem_id == "riemann_rarefaction_1d":
        return ProblemSpec(
            problem_id, 1, (-np.pi, np.pi), False, partial(_step, left=-2.0, right=2.0), (-2.0, 2.0),
            exact=partial(exact_riemann, left=-2.0, right=2.0), default_t_final=1.2,
        )
    if problem_id == "burgers_2d_sinbump":
        return ProblemSpec(problem_id, 2, (0.0, 2.0, 0.0, 2.0), False, _sinbump, (0.0, 1.0), default_t_final=1.0)
    if problem_id == "riemann_2d":
        q = (1.0, 2.0, 4.0, 3.0) if quadrants is None else tuple(float(v) for v in quadrants)
        if len(q) != 4:
            raise ValueError("riemann_2d needs four quadrant values a,b,c,d")
        return ProblemSpec(
            problem_id, 2, (-0.5, 0.5, -0.5, 0.5), False, partial(_quadrant_data, q=q), (min(q), max(q)),
            quadrants=q, default_t_final=0.1,
        )
    raise ValueError(f"unknown problem {problem_id!r}; choose from {', '.join(PROBLEM_IDS)}")
