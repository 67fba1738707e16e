"""Projection of evolved moving-cell data back onto the uniform background mesh.

Both projections integrate a piecewise polynomial over the uniform cells. We
build its running integral ``Phi`` at the downstream nodes (cumulative masses)
and inside a downstream cell add the exact partial integral of that cell's
polynomial, so a uniform cell's mass is ``Phi(x_{j+1/2}) - Phi(x_{j-1/2})``.
Whole downstream cells therefore contribute their mass exactly, and partial
overlaps contribute the polynomial's integral over the overlap.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import GeometryError, NumericalFailure
from .grid import CellAverageField, MergedGrid, Periodic, UniformGrid1D
from .reconstruct import ReconPolynomial

COINCIDENCE_TOL = 1e-12


def _cumulative(merged: MergedGrid, coeffs, targets: np.ndarray) -> np.ndarray:
    nodes = merged.boundaries
    widths = np.diff(nodes)
    if np.any(~(widths > 0)):
        raise GeometryError("downstream cells must have positive width")
    masses = merged.masses
    cum = np.concatenate([[0.0], np.cumsum(masses)])
    total = cum[-1]
    x = np.asarray(targets, dtype=float)
    shift = np.zeros_like(x)
    if isinstance(merged.bc, Periodic):
        period = merged.period if merged.period is not None else nodes[-1] - nodes[0]
        laps = np.floor((x - nodes[0]) / period)
        x = x - laps * period
        shift = laps * total
    else:
        tol = COINCIDENCE_TOL * merged.dx
        outside = (x < nodes[0] - tol) | (x > nodes[-1] + tol)
        if np.any(outside):
            k = int(np.flatnonzero(outside)[0])
            raise GeometryError(
                f"uniform node x={x[k]} not covered by downstream cells [{nodes[0]}, {nodes[-1]}]"
            )
    m = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, masses.size - 1)
    a, b, c = (np.asarray(v, dtype=float)[m] for v in coeffs)
    w = widths[m]
    s = (x - 0.5 * (nodes[m] + nodes[m + 1])) / w
    s0 = -0.5

    def prim(t):
        return ((a / 3.0) * t + b / 2.0) * t * t + c * t

    partial = w * (prim(s) - prim(s0))
    return cum[m] + partial + shift


def _project(merged: MergedGrid, coeffs, grid: UniformGrid1D, bc) -> CellAverageField:
    phi = _cumulative(merged, coeffs, grid.nodes)
    values = np.diff(phi) / grid.dx
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NumericalFailure(f"non-finite projected average in cell {bad[0]}")
    return CellAverageField(grid, values, bc)


def project_first_order(merged_downstream: MergedGrid, grid: UniformGrid1D, bc=None) -> CellAverageField:
    """Overlap-weighted averages of the downstream cells."""
    averages = merged_downstream.masses / np.diff(merged_downstream.boundaries)
    zeros = np.zeros_like(averages)
    bc = merged_downstream.bc if bc is None else bc
    return _project(merged_downstream, (zeros, zeros, averages), grid, bc)


def project_high_order(
    merged_downstream: MergedGrid,
    polynomials,
    grid: UniformGrid1D,
    bc=None,
) -> CellAverageField:
    """Exact averages of the piecewise-quadratic downstream reconstruction.

    ``polynomials`` is either a sequence of :class:`ReconPolynomial`, one per
    downstream cell, or a coefficient triple ``(a, b, c)`` of arrays in each
    cell's local coordinate.
    """
    bc = merged_downstream.bc if bc is None else bc
    return _project(merged_downstream, _as_coeffs(polynomials, merged_downstream.n_cells), grid, bc)


def _as_coeffs(polynomials, n_cells: int):
    if isinstance(polynomials, tuple) and len(polynomials) == 3 and np.ndim(polynomials[0]) == 1:
        coeffs = tuple(np.asarray(v, dtype=float) for v in polynomials)
    else:
        polys: Sequence[ReconPolynomial] = list(polynomials)
        coeffs = (
            np.array([p.a for p in polys]),
            np.array([p.b for p in polys]),
            np.array([p.c for p in polys]),
        )
    if any(v.shape != (n_cells,) for v in coeffs):
        raise ValueError(f"expected {n_cells} polynomials")
    return coeffs
