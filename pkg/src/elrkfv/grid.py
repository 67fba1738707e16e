"""Background mesh, cell-average fields, boundary padding and moving cells."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import GeometryError

GHOST_WIDTH = 3


@dataclass(frozen=True)
class UniformGrid1D:
    """``n_cells`` equal cells on ``[x_lo, x_hi]``."""

    x_lo: float
    x_hi: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be positive, got {self.n_cells}")
        if not self.x_hi > self.x_lo:
            raise ValueError(f"empty domain [{self.x_lo}, {self.x_hi}]")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def nodes(self) -> np.ndarray:
        return self.x_lo + self.dx * np.arange(self.n_cells + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_lo + self.dx * (np.arange(self.n_cells) + 0.5)


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class Dirichlet:
    """Boundary states frozen in time, used for every ghost cell on that side."""

    left: float
    right: float


BoundaryCondition = Union[Periodic, Dirichlet]


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CellAverageField:
    grid: UniformGrid1D
    values: np.ndarray
    bc: BoundaryCondition = field(default_factory=Periodic)

    def __post_init__(self):
        values = _readonly(self.values)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} cell averages, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("cell averages must be finite")
        object.__setattr__(self, "values", values)

    def with_values(self, values) -> "CellAverageField":
        return CellAverageField(self.grid, values, self.bc)

    @property
    def mass(self) -> float:
        return float(self.grid.dx * np.sum(self.values))

    @property
    def total_variation(self) -> float:
        v = self.values
        if isinstance(self.bc, Periodic):
            return float(np.sum(np.abs(np.diff(np.append(v, v[0])))))
        return float(np.sum(np.abs(np.diff(v))))


def pad_values(values: np.ndarray, width: int, bc: BoundaryCondition) -> np.ndarray:
    """Extend ``values`` by ``width`` ghost entries on both sides."""
    values = np.asarray(values, dtype=float)
    if width < 1:
        raise ValueError("ghost width must be at least 1")
    if isinstance(bc, Periodic):
        if width > values.size:
            raise ValueError(
                f"ghost width {width} exceeds {values.size} cells: periodic wrap is ambiguous"
            )
        return np.concatenate([values[-width:], values, values[:width]])
    return np.concatenate(
        [np.full(width, float(bc.left)), values, np.full(width, float(bc.right))]
    )


def ghost_pad(field: CellAverageField, width: int = GHOST_WIDTH) -> np.ndarray:
    return pad_values(field.values, width, field.bc)


@dataclass(frozen=True)
class SpaceTimeRegion:
    """Trapezoid swept by a cell whose ends move along straight lines."""

    x_left: float
    nu_left: float
    x_right: float
    nu_right: float
    t0: float
    dt: float

    def width(self, t: float) -> float:
        return (self.x_right - self.x_left) + (self.nu_right - self.nu_left) * (t - self.t0)


def region_interval(region: SpaceTimeRegion, t: float) -> Tuple[float, float]:
    if not (region.t0 <= t <= region.t0 + region.dt):
        raise ValueError(f"t={t} outside [{region.t0}, {region.t0 + region.dt}]")
    tau = t - region.t0
    left = region.x_left + region.nu_left * tau
    right = region.x_right + region.nu_right * tau
    if not right > left:
        raise GeometryError(
            f"cell boundaries crossed at t={t}: left={left}, right={right}"
        )
    return left, right


@dataclass(frozen=True, eq=False)
class MergedGrid:
    """Post-merging partition of one step.

    ``boundaries`` are node positions at the start of the step (for periodic
    problems they are unrolled, so they increase by exactly one period from
    the first to the last node). ``members[m]`` lists the working-line cell
    indices that make up merged cell ``m``; for Dirichlet problems the working
    line includes the ghost extension, so indices may be negative or exceed
    the physical cell count.
    """

    boundaries: np.ndarray
    node_velocities: np.ndarray
    members: Tuple[np.ndarray, ...]
    masses: np.ndarray
    bc: BoundaryCondition
    dx: float
    period: Optional[float] = None
    time_offset: float = 0.0

    def __post_init__(self):
        for name in ("boundaries", "node_velocities", "masses"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        if self.boundaries.shape != self.node_velocities.shape:
            raise ValueError("one velocity per boundary node required")
        if self.masses.shape != (self.boundaries.size - 1,):
            raise ValueError("one mass per merged cell required")

    @property
    def n_cells(self) -> int:
        return self.masses.size

    @property
    def merge_count(self) -> int:
        """Number of merged cells built from more than one uniform cell."""
        return int(sum(len(m) > 1 for m in self.members))

    def nodes_at(self, tau: float) -> np.ndarray:
        """Boundary positions a time ``tau`` after the start of the step."""
        return self.boundaries + self.node_velocities * tau

    def widths(self, tau: float = 0.0) -> np.ndarray:
        return np.diff(self.boundaries) + np.diff(self.node_velocities) * tau

    def averages(self, tau: float = 0.0) -> np.ndarray:
        return self.masses / self.widths(tau)

    def advance(self, tau: float, masses: Sequence[float]) -> "MergedGrid":
        """Same partition moved forward by ``tau`` and carrying new masses."""
        return MergedGrid(
            boundaries=self.nodes_at(tau),
            node_velocities=self.node_velocities,
            members=self.members,
            masses=np.asarray(masses, dtype=float),
            bc=self.bc,
            dx=self.dx,
            period=self.period,
            time_offset=self.time_offset + tau,
        )
