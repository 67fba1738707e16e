"""Modified flux, Lax-Friedrichs flux and SSP-RK updates over moving merged cells."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .characteristics import FluxSpec
from .errors import GeometryError, NumericalFailure
from .grid import MergedGrid, Periodic
from .reconstruct import EPSILON, GAMMA, edge_values, reconstruct_line

RECON_PAD = 2


class RKScheme(enum.IntEnum):
    RK1 = 1
    RK2 = 2
    RK3 = 3

    @property
    def horizon_factor(self) -> int:
        """Multiple of ``dt`` over which cell ends must not cross."""
        return 1 if self is RKScheme.RK1 else 2

    @property
    def threshold_mode(self) -> str:
        return "first_order" if self is RKScheme.RK1 else "high_order"


@dataclass(frozen=True, eq=False)
class StageState:
    stage_time: float
    widths: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        widths = np.asarray(self.widths, dtype=float)
        bad = np.flatnonzero(~(widths > 0))
        if bad.size:
            raise GeometryError(
                f"merged cell {bad[0]} has width {widths[bad[0]]} at stage time {self.stage_time}"
            )
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "masses", np.asarray(self.masses, dtype=float))

    @property
    def averages(self) -> np.ndarray:
        return self.masses / self.widths


def modified_flux(u, nu, flux: FluxSpec, x=0.0):
    """Flux seen by an observer moving with speed ``nu``."""
    return flux.f(u, x) - nu * np.asarray(u, dtype=float)


def lf_alpha(u_minus, u_plus, nu, flux: FluxSpec, x=0.0):
    return np.maximum(np.abs(flux.df(u_minus, x) - nu), np.abs(flux.df(u_plus, x) - nu))


def lax_friedrichs(u_minus, u_plus, nu, flux: FluxSpec, x=0.0, alpha=None):
    """Lax-Friedrichs flux for the modified flux; ``alpha`` defaults to the local bound."""
    u_minus = np.asarray(u_minus, dtype=float)
    u_plus = np.asarray(u_plus, dtype=float)
    if alpha is None:
        alpha = lf_alpha(u_minus, u_plus, nu, flux, x)
    return 0.5 * (modified_flux(u_minus, nu, flux, x) + modified_flux(u_plus, nu, flux, x)) - 0.5 * alpha * (
        u_plus - u_minus
    )


def _padded_line(values, widths, bc, dx, pad):
    n = values.size
    if isinstance(bc, Periodic):
        idx = np.arange(-pad, n + pad) % n
        return widths[idx], values[idx]
    w = np.concatenate([np.full(pad, dx), widths, np.full(pad, dx)])
    v = np.concatenate([np.full(pad, float(bc.left)), values, np.full(pad, float(bc.right))])
    return w, v


def reconstruct_cells(
    widths, averages, bc, dx: float, recon: str, gamma: float = GAMMA, eps: float = EPSILON
):
    """Per-cell quadratic coefficients on a (possibly nonuniform) line of cells."""
    widths = np.asarray(widths, dtype=float)
    averages = np.asarray(averages, dtype=float)
    w, v = _padded_line(averages, widths, bc, dx, RECON_PAD)
    return reconstruct_line(w, v, recon, RECON_PAD, gamma, eps)


def interface_states(
    widths, averages, bc, dx: float, recon: str, gamma: float = GAMMA, eps: float = EPSILON
) -> Tuple[np.ndarray, np.ndarray]:
    """Left and right traces ``(u-, u+)`` at every node of a line of cells."""
    coeffs = reconstruct_cells(widths, averages, bc, dx, recon, gamma, eps)
    left_edge, right_edge = edge_values(coeffs)
    n = left_edge.size
    u_minus = np.empty(n + 1)
    u_plus = np.empty(n + 1)
    u_minus[1:] = right_edge
    u_plus[:-1] = left_edge
    if isinstance(bc, Periodic):
        u_minus[0] = right_edge[-1]
        u_plus[-1] = left_edge[0]
    else:
        u_minus[0] = bc.left
        u_plus[-1] = bc.right
    return u_minus, u_plus


def node_fluxes(
    u_minus,
    u_plus,
    nu,
    x_nodes,
    flux: FluxSpec,
    periodic: bool,
    alpha_mode: str = "local",
) -> np.ndarray:
    alpha = lf_alpha(u_minus, u_plus, nu, flux, x_nodes)
    if alpha_mode == "global":
        alpha = np.full_like(alpha, alpha.max())
    elif alpha_mode != "local":
        raise ValueError(f"unknown alpha mode {alpha_mode!r}")
    fluxes = lax_friedrichs(u_minus, u_plus, nu, flux, x_nodes, alpha)
    if periodic:
        # first and last node are the same point: keep the budget closed
        fluxes[-1] = fluxes[0]
    bad = np.flatnonzero(~np.isfinite(fluxes))
    if bad.size:
        raise NumericalFailure(f"non-finite flux at merged node {bad[0]}")
    return fluxes


def rhs(
    state: StageState,
    merged: MergedGrid,
    flux: FluxSpec,
    recon: str,
    alpha_mode: str = "local",
    gamma: float = GAMMA,
    eps: float = EPSILON,
) -> np.ndarray:
    """Rate of change of every merged-cell mass at ``state.stage_time``."""
    averages = state.averages
    bad = np.flatnonzero(~np.isfinite(averages))
    if bad.size:
        raise NumericalFailure(f"non-finite average in merged cell {bad[0]} at stage time {state.stage_time}")
    u_minus, u_plus = interface_states(state.widths, averages, merged.bc, merged.dx, recon, gamma, eps)
    bad = np.flatnonzero(~(np.isfinite(u_minus) & np.isfinite(u_plus)))
    if bad.size:
        raise NumericalFailure(f"non-finite reconstruction at merged node {bad[0]}")
    fluxes = node_fluxes(
        u_minus,
        u_plus,
        merged.node_velocities,
        merged.nodes_at(state.stage_time),
        flux,
        isinstance(merged.bc, Periodic),
        alpha_mode,
    )
    return -np.diff(fluxes)


def rk_step(
    merged: MergedGrid,
    scheme: RKScheme,
    dt: float,
    flux: FluxSpec,
    recon: str,
    stored_fluxes,
    alpha_mode: str = "local",
    gamma: float = GAMMA,
    eps: float = EPSILON,
) -> np.ndarray:
    """Merged-cell masses at ``t + dt``.

    ``stored_fluxes`` are the numerical fluxes at the merged nodes at the
    start of the step, already evaluated on the uniform mesh. Later stages
    reconstruct on the moved, nonuniform cells.
    """
    scheme = RKScheme(scheme)
    stored = np.asarray(stored_fluxes, dtype=float)
    if stored.shape != (merged.n_cells + 1,):
        raise ValueError(f"expected {merged.n_cells + 1} stored fluxes, got {stored.shape}")
    m0 = merged.masses
    l0 = -np.diff(stored)
    if scheme is RKScheme.RK1:
        return m0 + dt * l0

    def stage(tau, masses):
        state = StageState(tau, merged.widths(tau), masses)
        return rhs(state, merged, flux, recon, alpha_mode, gamma, eps)

    m1 = m0 + dt * l0
    l1 = stage(dt, m1)
    if scheme is RKScheme.RK2:
        return m0 + 0.5 * dt * (l0 + l1)
    m2 = m0 + 0.25 * dt * (l0 + l1)
    l2 = stage(0.5 * dt, m2)
    return m0 + dt * (l0 + l1 + 4.0 * l2) / 6.0
