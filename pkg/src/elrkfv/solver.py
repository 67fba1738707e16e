"""One-step and multi-step drivers in 1D and a Strang-split driver in 2D."""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .characteristics import BURGERS, FluxSpec, rh_velocity
from .errors import TimeStepError
from .evolve import RKScheme, interface_states, node_fluxes, reconstruct_cells, rk_step
from .grid import GHOST_WIDTH, CellAverageField, Dirichlet, Periodic, UniformGrid1D, pad_values
from .problems import ProblemSpec, get_problem
from .projection import project_first_order, project_high_order
from .reconstruct import EPSILON, GAMMA, RECON_METHODS, reconstruct_line
from .troubled import (
    WINDOW,
    Bounds,
    TroubledType,
    classify_padded,
    effective_troubled,
    influence_region_padded,
    merge,
    threshold,
)

log = logging.getLogger(__name__)

_RECON_ALIASES = {"piecewise_constant": "const", "weno3": "wenoao3", "weno": "wenoao3", "eno": "eno3"}


@dataclass(frozen=True)
class SolverConfig:
    rk: RKScheme = RKScheme.RK3
    recon: str = "eno3"
    cfl: float = 1.0
    lambda_mode: str = "global"
    strict_dt: bool = False
    gauss_points: int = 2
    gamma: float = GAMMA
    eps: float = EPSILON
    strict_merge: bool = False
    alpha_mode: str = "local"
    initial_recon: Optional[str] = None
    merge_horizon: str = "rk"
    final_step: str = "truncate"

    def __post_init__(self):
        object.__setattr__(self, "rk", RKScheme(int(self.rk)))
        recon = _RECON_ALIASES.get(self.recon, self.recon)
        if recon not in RECON_METHODS:
            raise ValueError(f"unknown reconstruction {self.recon!r}")
        object.__setattr__(self, "recon", recon)
        initial = recon if self.initial_recon is None else _RECON_ALIASES.get(self.initial_recon, self.initial_recon)
        if initial not in RECON_METHODS:
            raise ValueError(f"unknown reconstruction {self.initial_recon!r}")
        object.__setattr__(self, "initial_recon", initial)
        if not self.cfl > 0:
            raise ValueError("cfl must be positive")
        if self.lambda_mode not in ("global", "local"):
            raise ValueError(f"unknown lambda mode {self.lambda_mode!r}")
        if self.gauss_points not in (1, 2, 3):
            raise ValueError("gauss_points must be 1, 2 or 3")
        if self.alpha_mode not in ("local", "global"):
            raise ValueError(f"unknown alpha mode {self.alpha_mode!r}")
        if self.merge_horizon not in ("step", "rk"):
            raise ValueError(f"unknown merge horizon {self.merge_horizon!r}")
        if self.final_step not in ("truncate", "uniform"):
            raise ValueError(f"unknown final step policy {self.final_step!r}")

    def merge_window(self, dt: float) -> float:
        """Time over which merged cell ends must stay apart.

        ``"step"`` checks the step itself, which is all the stage geometry
        ever uses; ``"rk"`` checks the longer detection window of the
        high-order schemes (``2 dt``).
        """
        return dt if self.merge_horizon == "step" else self.rk.horizon_factor * dt


@dataclass(frozen=True)
class StepInfo:
    troubled: int
    effective: int
    merge_count: int
    merged_cells: int


def _boundary_states(field: CellAverageField) -> np.ndarray:
    if isinstance(field.bc, Dirichlet):
        return np.array([field.bc.left, field.bc.right], dtype=float)
    return np.empty(0)


def default_bounds(field: CellAverageField, mode: str = "global") -> Bounds:
    return Bounds.of(np.concatenate([field.values, _boundary_states(field)]), mode)


def _speed_bound(field: CellAverageField, flux: FluxSpec, grid: UniformGrid1D) -> float:
    if flux.is_burgers:
        return float(np.max(np.abs(np.concatenate([field.values, _boundary_states(field)]))))
    x = np.linspace(grid.x_lo, grid.x_hi, 4 * grid.n_cells + 1)
    return float(np.max(np.abs(flux.a(x))))


def _lambda(bounds: Bounds, padded: np.ndarray) -> float:
    if bounds.mode == "local":
        windows = np.lib.stride_tricks.sliding_window_view(padded, 2 * WINDOW + 1)
        spread = float(np.max(windows.max(axis=1) - windows.min(axis=1)))
        return math.inf if spread == 0 else 4.0 / spread
    return bounds.lam


def _working_line(field: CellAverageField, flux: FluxSpec, horizon: float):
    """Grid, field and index offset of the line that is actually evolved.

    Dirichlet lines are extended by frozen ghost cells far enough that no
    moving node from outside can enter the physical domain within the step.
    """
    grid = field.grid
    if isinstance(field.bc, Periodic):
        return grid, field, 0
    reach = math.ceil(horizon * _speed_bound(field, flux, grid) / grid.dx)
    g = GHOST_WIDTH + reach + 2
    ext = UniformGrid1D(grid.x_lo - g * grid.dx, grid.x_hi + g * grid.dx, grid.n_cells + 2 * g)
    values = np.concatenate([np.full(g, field.bc.left), field.values, np.full(g, field.bc.right)])
    return ext, CellAverageField(ext, values, field.bc), -g


def find_troubled(padded: np.ndarray, pad: int, theta: float) -> List[Tuple[int, TroubledType]]:
    codes = classify_padded(padded, pad, theta)
    return [(int(j), TroubledType(int(codes[j]))) for j in np.flatnonzero(codes)]


def advance_1d(
    field: CellAverageField,
    dt: float,
    config: SolverConfig = SolverConfig(),
    flux: FluxSpec = BURGERS,
    bounds: Optional[Bounds] = None,
) -> Tuple[CellAverageField, StepInfo]:
    """One full step: trace, classify, merge, evolve, project."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    if dt == 0:
        return field, StepInfo(0, 0, 0, field.grid.n_cells)
    scheme = config.rk
    horizon = scheme.horizon_factor * dt
    periodic = isinstance(field.bc, Periodic)
    wgrid, wfield, offset = _working_line(field, flux, horizon)
    n_w = wgrid.n_cells
    dx = wgrid.dx

    padded = pad_values(wfield.values, WINDOW, wfield.bc)
    nu = rh_velocity(padded[WINDOW - 1 : WINDOW + n_w], padded[WINDOW : WINDOW + n_w + 1], flux, wgrid.nodes)

    # fluxes at the start of the step live on the uniform mesh
    u_minus, u_plus = interface_states(
        np.full(n_w, dx), wfield.values, wfield.bc, dx, config.initial_recon, config.gamma, config.eps
    )
    uniform_fluxes = node_fluxes(u_minus, u_plus, nu, wgrid.nodes, flux, periodic, config.alpha_mode)

    troubled: List[Tuple[int, TroubledType]] = []
    effective: List[Tuple[int, TroubledType]] = []
    regions = []
    if flux.is_burgers:
        if bounds is None:
            bounds = default_bounds(field, config.lambda_mode)
        elif bounds.mode != config.lambda_mode:
            bounds = Bounds(bounds.upper, bounds.lower, config.lambda_mode)
        lam = max(_lambda(bounds, padded), dt / dx)
        theta = threshold(lam, scheme.threshold_mode)
        troubled = find_troubled(padded, WINDOW, theta)
        effective = effective_troubled(troubled, n_w if periodic else None)
        regions = [influence_region_padded(padded, WINDOW, j, t, bounds) for j, t in effective]

    merged = merge(wgrid, wfield, regions, nu, dt, config.merge_window(dt), config.strict_merge, offset)
    first = np.array([m[0] for m in merged.members]) - offset
    last = first[0] if periodic else n_w
    stored = np.append(uniform_fluxes[first], uniform_fluxes[last])
    masses = rk_step(merged, scheme, dt, flux, config.recon, stored, config.alpha_mode, config.gamma, config.eps)

    downstream = merged.advance(dt, masses)
    if config.recon == "const":
        out = project_first_order(downstream, field.grid, field.bc)
    else:
        coeffs = reconstruct_cells(
            downstream.widths(), downstream.averages(), downstream.bc, dx, config.recon, config.gamma, config.eps
        )
        out = project_high_order(downstream, coeffs, field.grid, field.bc)
    info = StepInfo(len(troubled), len(effective), downstream.merge_count, downstream.n_cells)
    return out, info


def step_1d(
    field: CellAverageField,
    dt: float,
    config: SolverConfig = SolverConfig(),
    flux: FluxSpec = BURGERS,
    bounds: Optional[Bounds] = None,
) -> CellAverageField:
    return advance_1d(field, dt, config, flux, bounds)[0]


def _has_troubled(field: CellAverageField, bounds: Bounds, dt: float, config: SolverConfig) -> bool:
    padded = pad_values(field.values, WINDOW, field.bc)
    lam = max(_lambda(bounds, padded), dt / field.grid.dx)
    return bool(np.any(classify_padded(padded, WINDOW, threshold(lam, config.rk.threshold_mode))))


def _enforce_merge_limit(dt: float, limit: float, troubled: bool, strict: bool) -> float:
    if troubled and dt > limit:
        msg = f"dt={dt:.6g} exceeds the merging stability limit {limit:.6g}"
        if strict:
            raise TimeStepError(msg)
        warnings.warn(msg + "; clamping", RuntimeWarning, stacklevel=3)
        return limit
    return dt


def choose_dt(
    field: CellAverageField,
    flux: FluxSpec = BURGERS,
    config: SolverConfig = SolverConfig(),
    bounds: Optional[Bounds] = None,
    max_speed: Optional[float] = None,
    t_remaining: float = math.inf,
) -> float:
    """Time step ``cfl * dx / max|f'(u)|``, limited when troubled cells are present.

    The merging limit is ``dt <= lambda * dx`` with ``lambda = 4 / (a - b)``;
    equality is accepted. Without any wave speed the step is ``t_remaining``.
    """
    grid = field.grid
    speed = _speed_bound(field, flux, grid) if max_speed is None else max_speed
    dt = t_remaining if speed == 0 else config.cfl * grid.dx / speed
    if not math.isfinite(dt):
        raise TimeStepError("no finite time step: zero wave speed and no final time")
    if flux.is_burgers:
        bounds = default_bounds(field, config.lambda_mode) if bounds is None else bounds
        padded = pad_values(field.values, WINDOW, field.bc)
        limit = _lambda(bounds, padded) * grid.dx
        if math.isfinite(limit):
            dt = _enforce_merge_limit(dt, limit, _has_troubled(field, bounds, dt, config), config.strict_dt)
    return min(dt, t_remaining)


@dataclass
class Diagnostics:
    times: List[float] = field(default_factory=list)
    total_variation: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    merge_count: List[int] = field(default_factory=list)
    troubled: List[int] = field(default_factory=list)
    dt: float = 0.0

    def record(self, t: float, tv: float, mass: float, info: Optional[StepInfo]):
        self.times.append(t)
        self.total_variation.append(tv)
        self.mass.append(mass)
        self.merge_count.append(0 if info is None else info.merge_count)
        self.troubled.append(0 if info is None else info.troubled)

    @property
    def n_steps(self) -> int:
        return max(len(self.times) - 1, 0)


def time_levels(t_final: float, dt: float, policy: str = "truncate") -> List[float]:
    """Step sizes reaching ``t_final``.

    ``"truncate"`` keeps ``dt`` and shortens the last step; ``"uniform"``
    takes the fewest equal steps no longer than ``dt``.
    """
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if t_final == 0:
        return []
    if policy == "uniform":
        n = max(1, int(math.ceil(t_final / dt * (1 - 1e-12))))
        return [t_final / n] * n
    if policy != "truncate":
        raise ValueError(f"unknown final step policy {policy!r}")
    n_full = int(math.floor(t_final / dt * (1 + 1e-12)))
    steps = [dt] * n_full
    rest = t_final - n_full * dt
    if rest > 1e-12 * max(t_final, 1.0):
        steps.append(rest)
    return steps


def _resolve(problem: Union[str, ProblemSpec], quadrants=None) -> ProblemSpec:
    return get_problem(problem, quadrants) if isinstance(problem, str) else problem


def evolve_1d(
    field: CellAverageField,
    t_final: float,
    dt: float,
    config: SolverConfig = SolverConfig(),
    flux: FluxSpec = BURGERS,
    bounds: Optional[Bounds] = None,
    max_steps: Optional[int] = None,
) -> Tuple[CellAverageField, Diagnostics]:
    diag = Diagnostics(dt=dt)
    diag.record(0.0, field.total_variation, field.mass, None)
    t = 0.0
    for k, step in enumerate(time_levels(t_final, dt, config.final_step)):
        if max_steps is not None and k >= max_steps:
            break
        field, info = advance_1d(field, step, config, flux, bounds)
        t += step
        diag.record(t, field.total_variation, field.mass, info)
    return field, diag


def solve_1d(
    problem: Union[str, ProblemSpec],
    n_cells: int,
    cfl: Optional[float] = None,
    t_final: Optional[float] = None,
    config: SolverConfig = SolverConfig(),
) -> Tuple[CellAverageField, Diagnostics]:
    """Solve a 1D problem with a fixed step chosen from the initial data."""
    spec = _resolve(problem)
    if spec.dim != 1:
        raise ValueError(f"{spec.id} is not a 1D problem")
    cfl = config.cfl if cfl is None else cfl
    t_final = spec.default_t_final if t_final is None else t_final
    field0 = spec.initial_field(n_cells)
    if t_final == 0:
        diag = Diagnostics()
        diag.record(0.0, field0.total_variation, field0.mass, None)
        return field0, diag
    run_config = SolverConfig(**{**config.__dict__, "cfl": cfl})
    bounds = Bounds(spec.bounds[1], spec.bounds[0], run_config.lambda_mode)
    dt = choose_dt(field0, spec.flux, run_config, bounds, spec.speed_bound, t_final)
    return evolve_1d(field0, t_final, dt, run_config, spec.flux, bounds)


# ---------------------------------------------------------------- 2D


@dataclass(frozen=True, eq=False)
class Field2D:
    """Cell averages ``values[i, j]`` on a tensor grid (``i`` along x).

    For Dirichlet problems ``x_edges[j]`` holds the (left, right) states of
    row ``j`` and ``y_edges[i]`` the (bottom, top) states of column ``i``.
    They default to the boundary cells of ``values``. With
    ``edge_mode="follow"`` they are re-read from the boundary cells whenever
    the values change, so waves crossing a boundary line are not fed stale
    states; ``"frozen"`` keeps the edges of the initial data.
    """

    grid_x: UniformGrid1D
    grid_y: UniformGrid1D
    values: np.ndarray
    periodic: bool = False
    x_edges: Optional[np.ndarray] = None
    y_edges: Optional[np.ndarray] = None
    edge_mode: str = "follow"

    def __post_init__(self):
        if self.edge_mode not in ("follow", "frozen"):
            raise ValueError(f"unknown edge mode {self.edge_mode!r}")
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid_x.n_cells, self.grid_y.n_cells):
            raise ValueError(f"expected shape {(self.grid_x.n_cells, self.grid_y.n_cells)}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("cell averages must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if not self.periodic:
            if self.x_edges is None:
                object.__setattr__(self, "x_edges", np.stack([values[0, :], values[-1, :]], axis=1))
            if self.y_edges is None:
                object.__setattr__(self, "y_edges", np.stack([values[:, 0], values[:, -1]], axis=1))

    def with_values(self, values) -> "Field2D":
        if self.edge_mode == "follow":
            return Field2D(self.grid_x, self.grid_y, values, self.periodic, edge_mode="follow")
        return Field2D(self.grid_x, self.grid_y, values, self.periodic, self.x_edges, self.y_edges, "frozen")

    def grid(self, axis: int) -> UniformGrid1D:
        return self.grid_x if axis == 0 else self.grid_y

    def edges(self, axis: int) -> Optional[np.ndarray]:
        """Boundary states for lines along ``axis``, one (lo, hi) pair per line."""
        return self.x_edges if axis == 0 else self.y_edges

    def bc(self, axis: int, line: int):
        if self.periodic:
            return Periodic()
        lo, hi = self.edges(axis)[line]
        return Dirichlet(float(lo), float(hi))

    @property
    def mass(self) -> float:
        return float(self.grid_x.dx * self.grid_y.dx * self.values.sum())


@dataclass(frozen=True, eq=False)
class SliceSet:
    """Interval averages along ``axis`` at Gauss nodes across it.

    ``values[l, k, :]`` is the line along ``axis`` through cross-cell ``k`` at
    reference node ``nodes[l]`` in ``[-1, 1]``.
    """

    axis: int
    values: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    source: Field2D

    def line(self, l: int, k: int) -> CellAverageField:
        return CellAverageField(self.source.grid(self.axis), self.values[l, k], self.source.bc(self.axis, k))

    def node_positions(self) -> np.ndarray:
        """Physical cross coordinates of every slice, shape ``(L, n_cross)``."""
        cross = self.source.grid(1 - self.axis)
        return cross.centers[None, :] + 0.5 * cross.dx * self.nodes[:, None]


def gauss_rule(points: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(points)


def cell_to_slices(field2d: Field2D, axis: int, gauss_points: int = 2, recon: str = "eno3") -> SliceSet:
    """Reconstruct across ``axis`` and sample at the Gauss nodes of every cross cell."""
    if axis not in (0, 1):
        raise ValueError("axis must be 0 (x) or 1 (y)")
    nodes, weights = gauss_rule(gauss_points)
    # cross direction first: shape (n_cross, n_along)
    data = field2d.values.T if axis == 0 else field2d.values
    cross_grid = field2d.grid(1 - axis)
    n_cross = cross_grid.n_cells
    pad = 2
    if field2d.periodic:
        padded = data[np.arange(-pad, n_cross + pad) % n_cross]
    else:
        edges = field2d.edges(1 - axis)  # (n_along, 2)
        lo = np.repeat(edges[None, :, 0], pad, axis=0)
        hi = np.repeat(edges[None, :, 1], pad, axis=0)
        padded = np.concatenate([lo, data, hi], axis=0)
    a, b, c = reconstruct_line(np.full(padded.shape, cross_grid.dx), padded, recon, pad)
    s = 0.5 * nodes
    values = a[None] * s[:, None, None] ** 2 + b[None] * s[:, None, None] + c[None]  # (L, n_cross, n_along)
    return SliceSet(axis, values, nodes, weights, field2d)


def slices_to_cells(slices: SliceSet) -> Field2D:
    cells = 0.5 * np.tensordot(slices.weights, slices.values, axes=(0, 0))  # (n_cross, n_along)
    values = cells.T if slices.axis == 0 else cells
    return slices.source.with_values(values)


def sweep(
    field2d: Field2D,
    axis: int,
    dt: float,
    config: SolverConfig,
    flux: FluxSpec = BURGERS,
    bounds: Optional[Bounds] = None,
) -> Tuple[Field2D, int]:
    slices = cell_to_slices(field2d, axis, config.gauss_points, config.recon)
    out = np.empty_like(slices.values)
    merges = 0
    for l in range(slices.values.shape[0]):
        for k in range(slices.values.shape[1]):
            line, info = advance_1d(slices.line(l, k), dt, config, flux, bounds)
            out[l, k] = line.values
            merges += info.merge_count
    evolved = SliceSet(axis, out, slices.nodes, slices.weights, field2d)
    return slices_to_cells(evolved), merges


def strang_step_2d(
    field2d: Field2D,
    dt: float,
    config: SolverConfig = SolverConfig(),
    flux_x: FluxSpec = BURGERS,
    flux_y: FluxSpec = BURGERS,
    bounds: Optional[Bounds] = None,
) -> Field2D:
    """x for ``dt/2``, y for ``dt``, x for ``dt/2``."""
    return strang_step_2d_info(field2d, dt, config, flux_x, flux_y, bounds)[0]


def strang_step_2d_info(field2d, dt, config=SolverConfig(), flux_x=BURGERS, flux_y=BURGERS, bounds=None):
    merges = 0
    field2d, m = sweep(field2d, 0, 0.5 * dt, config, flux_x, bounds)
    merges += m
    field2d, m = sweep(field2d, 1, dt, config, flux_y, bounds)
    merges += m
    field2d, m = sweep(field2d, 0, 0.5 * dt, config, flux_x, bounds)
    return field2d, merges + m


def choose_dt_2d(
    field2d: Field2D,
    config: SolverConfig,
    bounds: Bounds,
    max_speed: Optional[float] = None,
    t_remaining: float = math.inf,
) -> float:
    """``dt = CFL / (max|f'|/dx + max|g'|/dy)`` with the 2D merging limit.

    The limit ``4 min(dx, dy) / (a - b)`` applies only when some row or
    column contains a troubled cell.
    """
    dx, dy = field2d.grid_x.dx, field2d.grid_y.dx
    speed = float(np.max(np.abs(field2d.values))) if max_speed is None else max_speed
    dt = t_remaining if speed == 0 else config.cfl / (speed / dx + speed / dy)
    limit = bounds.lam * min(dx, dy)
    if math.isfinite(limit):
        theta = threshold(max(bounds.lam, dt / min(dx, dy)), config.rk.threshold_mode)
        troubled = False
        for axis in (0, 1):
            data = field2d.values if axis == 0 else field2d.values.T
            for k in range(data.shape[1]):
                line = data[:, k]
                bc = field2d.bc(axis, k)
                if np.any(classify_padded(pad_values(line, WINDOW, bc), WINDOW, theta)):
                    troubled = True
                    break
            if troubled:
                break
        dt = _enforce_merge_limit(dt, limit, troubled, config.strict_dt)
    return min(dt, t_remaining)


@dataclass
class Diagnostics2D:
    times: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    merge_count: List[int] = field(default_factory=list)
    dt: float = 0.0


def solve_2d(
    problem: Union[str, ProblemSpec],
    nx: int,
    ny: int,
    cfl: Optional[float] = None,
    t_final: Optional[float] = None,
    config: SolverConfig = SolverConfig(),
    quadrants=None,
) -> Tuple[Field2D, Diagnostics2D]:
    spec = _resolve(problem, quadrants)
    if spec.dim != 2:
        raise ValueError(f"{spec.id} is not a 2D problem")
    cfl = config.cfl if cfl is None else cfl
    t_final = spec.default_t_final if t_final is None else t_final
    run_config = SolverConfig(**{**config.__dict__, "cfl": cfl})
    gx = UniformGrid1D(spec.domain[0], spec.domain[1], nx)
    gy = UniformGrid1D(spec.domain[2], spec.domain[3], ny)
    field2d = Field2D(gx, gy, spec.initial_values_2d(nx, ny), spec.periodic)
    bounds = Bounds(spec.bounds[1], spec.bounds[0], run_config.lambda_mode)
    diag = Diagnostics2D()
    diag.times.append(0.0)
    diag.mass.append(field2d.mass)
    diag.merge_count.append(0)
    if t_final == 0:
        return field2d, diag
    dt = choose_dt_2d(field2d, run_config, bounds, spec.speed_bound, t_final)
    diag.dt = dt
    t = 0.0
    for step in time_levels(t_final, dt, config.final_step):
        field2d, merges = strang_step_2d_info(field2d, step, run_config, spec.flux, spec.flux, bounds)
        t += step
        diag.times.append(t)
        diag.mass.append(field2d.mass)
        diag.merge_count.append(merges)
        log.debug("t=%.6g merges=%d", t, merges)
    return field2d, diag
