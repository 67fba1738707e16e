"""Third-order reconstructions from cell averages on nonuniform cells.

Every polynomial is written in the local coordinate ``s = (x - x_j) / dx_j`` of
its own cell, so ``s`` runs over ``[-1/2, 1/2]`` inside the cell and
``P(s) = a s^2 + b s + c``.  The batch functions take stencil data with the
stencil along axis 0 and broadcast over the remaining axes; the scalar
functions wrap them and return a :class:`ReconPolynomial`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

GAMMA = 0.9
EPSILON = 1e-8

Coeffs = Tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class ReconPolynomial:
    a: float
    b: float
    c: float
    cell_center: float = 0.0
    cell_width: float = 1.0

    @property
    def mean(self) -> float:
        """Average over the polynomial's own cell."""
        return self.c + self.a / 12.0


def evaluate(P: ReconPolynomial, x):
    s = (np.asarray(x, dtype=float) - P.cell_center) / P.cell_width
    return P.a * s * s + P.b * s + P.c


def _antiderivative(a, b, c, s):
    return ((a / 3.0) * s + b / 2.0) * s * s + c * s


def integrate_mass(P: ReconPolynomial, x1: float, x2: float) -> float:
    """Integral of ``P`` over ``[x1, x2]`` in physical units."""
    if x1 > x2:
        raise ValueError(f"need x1 <= x2, got ({x1}, {x2})")
    s1 = (x1 - P.cell_center) / P.cell_width
    s2 = (x2 - P.cell_center) / P.cell_width
    return float(
        P.cell_width * (_antiderivative(P.a, P.b, P.c, s2) - _antiderivative(P.a, P.b, P.c, s1))
    )


def quadratic_from_averages(edges, averages, own_average) -> Coeffs:
    """Quadratic whose means over three adjacent intervals match ``averages``.

    ``edges`` holds the four interval ends ``e0 < e1 < e2 < e3`` in the local
    coordinate of the target cell, which must be one of the three intervals.
    The polynomial is the derivative of the cubic interpolating the running
    integral at the four ends; ``c`` is then fixed from ``own_average`` so the
    target cell average is reproduced to the last bit available.
    """
    e0, e1, e2, e3 = edges
    v0, v1, v2 = averages
    d2 = (v1 - v0) / (e2 - e0)
    d3 = ((v2 - v1) / (e3 - e1) - d2) / (e3 - e0)
    a = 3.0 * d3
    b = 2.0 * d2 - 2.0 * d3 * (e0 + e1 + e2)
    c = own_average - a / 12.0
    return a, b, c


def _stencil_edges(widths, offset: int):
    """Cell ends, in units of the middle width, for a 3-cell stencil.

    ``widths`` has the stencil along axis 0 with the target cell at index
    ``offset`` (0: target is the right cell, 1: middle, 2: left cell).
    """
    h = [np.asarray(w, dtype=float) / widths[offset] for w in widths]
    if offset == 2:
        e3 = np.full_like(h[0], 0.5)
        e2 = e3 - 1.0
        e1 = e2 - h[1]
        e0 = e1 - h[0]
    elif offset == 1:
        e1 = np.full_like(h[0], -0.5)
        e2 = e1 + 1.0
        e0 = e1 - h[0]
        e3 = e2 + h[2]
    else:
        e0 = np.full_like(h[0], -0.5)
        e1 = e0 + 1.0
        e2 = e1 + h[1]
        e3 = e2 + h[2]
    return e0, e1, e2, e3


def _linear_slopes(widths, averages):
    hm, h0, hp = widths
    um, u0, up = averages
    slope_l = 2.0 * h0 * (u0 - um) / (hm + h0)
    slope_r = 2.0 * h0 * (up - u0) / (h0 + hp)
    return slope_l, slope_r


def weno_ao3_coeffs(widths, averages, gamma: float = GAMMA, eps: float = EPSILON) -> Coeffs:
    """Nonuniform WENO-AO(3,2) blend for the middle cell of each 3-cell stencil."""
    widths = np.asarray(widths, dtype=float)
    averages = np.asarray(averages, dtype=float)
    u0 = averages[1]
    ac, bc, cc = quadratic_from_averages(_stencil_edges(widths, 1), averages, u0)
    slope_l, slope_r = _linear_slopes(widths, averages)

    beta_c = bc * bc + (13.0 / 3.0) * ac * ac
    beta_l = slope_l * slope_l
    beta_r = slope_r * slope_r
    tau = 0.5 * (np.abs(beta_c - beta_l) + np.abs(beta_c - beta_r))

    gamma_side = 0.5 * (1.0 - gamma)
    wc = gamma * (1.0 + tau**2 / (beta_c + eps) ** 2)
    wl = gamma_side * (1.0 + tau**2 / (beta_l + eps) ** 2)
    wr = gamma_side * (1.0 + tau**2 / (beta_r + eps) ** 2)
    total = wc + wl + wr
    wc, wl, wr = wc / total, wl / total, wr / total

    # P = (wc/gamma)(pc - gl pl - gr pr) + wl pl + wr pr; pl, pr have constant term u0
    scale = wc / gamma
    side_l = wl - scale * gamma_side
    side_r = wr - scale * gamma_side
    a = scale * ac
    b = scale * bc + side_l * slope_l + side_r * slope_r
    c = u0 - a / 12.0
    return a, b, c


def _second_difference(xs, us):
    x0, x1, x2 = xs
    u0, u1, u2 = us
    return ((u0 - u1) / (x0 - x1) - (u1 - u2) / (x1 - x2)) / (x0 - x2)


def eno3_select(widths, averages) -> np.ndarray:
    """Stencil choice per cell: -1 left, 0 centered, +1 right."""
    widths = np.asarray(widths, dtype=float)
    u = np.asarray(averages, dtype=float)
    h = widths / widths[2]
    # cell centers in the local coordinate of the middle cell
    xc = np.empty_like(h)
    xc[2] = 0.0
    xc[1] = -0.5 * (h[1] + h[2])
    xc[0] = xc[1] - 0.5 * (h[0] + h[1])
    xc[3] = 0.5 * (h[2] + h[3])
    xc[4] = xc[3] + 0.5 * (h[3] + h[4])

    d1_left = np.abs((u[2] - u[1]) / (xc[2] - xc[1]))
    d1_right = np.abs((u[2] - u[3]) / (xc[2] - xc[3]))
    d2_left = np.abs(_second_difference(xc[0:3], u[0:3]))
    d2_center = np.abs(_second_difference(xc[1:4], u[1:4]))
    d2_right = np.abs(_second_difference(xc[2:5], u[2:5]))

    # a branch whose two comparisons are both exact ties is not taken
    d1_tie = d1_left == d1_right
    choose_left = (d1_left <= d1_right) & (d2_left <= d2_center) & ~(d1_tie & (d2_left == d2_center))
    choose_right = (d1_left >= d1_right) & (d2_center >= d2_right) & ~(d1_tie & (d2_center == d2_right))
    return np.where(choose_left, -1, np.where(choose_right, 1, 0))


def eno3_coeffs(widths, averages) -> Coeffs:
    """Nonuniform ENO3 for the middle cell of each 5-cell stencil."""
    widths = np.asarray(widths, dtype=float)
    averages = np.asarray(averages, dtype=float)
    choice = eno3_select(widths, averages)
    u0 = averages[2]
    left = quadratic_from_averages(_stencil_edges(widths[0:3], 2), averages[0:3], u0)
    center = quadratic_from_averages(_stencil_edges(widths[1:4], 1), averages[1:4], u0)
    right = quadratic_from_averages(_stencil_edges(widths[2:5], 0), averages[2:5], u0)
    a, b, c = (
        np.where(choice == -1, l, np.where(choice == 1, r, m))
        for l, m, r in zip(left, center, right)
    )
    return a, b, c


def _polynomial(coeffs, center, width) -> ReconPolynomial:
    a, b, c = (float(v) for v in coeffs)
    return ReconPolynomial(a, b, c, float(center), float(width))


def weno_ao3(
    widths: Sequence[float],
    averages: Sequence[float],
    center: float = 0.0,
    gamma: float = GAMMA,
    eps: float = EPSILON,
) -> ReconPolynomial:
    widths = np.asarray(widths, dtype=float)
    if widths.shape != (3,) or np.any(widths <= 0):
        raise ValueError("weno_ao3 needs three positive widths")
    coeffs = weno_ao3_coeffs(widths, np.asarray(averages, dtype=float), gamma, eps)
    return _polynomial(coeffs, center, widths[1])


def uniform_weno_ao3(averages: Sequence[float], dx: float, center: float = 0.0, **kw) -> ReconPolynomial:
    return weno_ao3(np.full(3, float(dx)), averages, center, **kw)


def eno3(widths: Sequence[float], averages: Sequence[float], center: float = 0.0) -> ReconPolynomial:
    widths = np.asarray(widths, dtype=float)
    if widths.shape != (5,) or np.any(widths <= 0):
        raise ValueError("eno3 needs five positive widths")
    coeffs = eno3_coeffs(widths, np.asarray(averages, dtype=float))
    return _polynomial(coeffs, center, widths[2])


RECON_METHODS = ("eno3", "wenoao3", "const")


def reconstruct_line(widths, averages, method: str, pad: int, gamma: float = GAMMA, eps: float = EPSILON) -> Coeffs:
    """Coefficients for every non-ghost cell of padded arrays.

    ``widths`` and ``averages`` carry ``pad`` ghost cells on each side of axis
    0 (``pad >= 2`` for ENO3); the result has ``len(widths) - 2 * pad``
    entries along that axis. Trailing axes are independent lines.
    """
    averages = np.asarray(averages, dtype=float)
    widths = np.asarray(widths, dtype=float)
    if widths.ndim == 1 and averages.ndim > 1:
        widths = widths.reshape(widths.shape + (1,) * (averages.ndim - 1))
    widths = np.broadcast_to(widths, averages.shape)
    n = widths.shape[0] - 2 * pad
    if method == "const":
        inner = averages[pad : pad + n]
        return np.zeros_like(inner), np.zeros_like(inner), inner.copy()
    if method == "wenoao3":
        k = (-1, 0, 1)
        stencil = np.stack([widths[pad + o : pad + o + n] for o in k])
        values = np.stack([averages[pad + o : pad + o + n] for o in k])
        return weno_ao3_coeffs(stencil, values, gamma, eps)
    if method == "eno3":
        if pad < 2:
            raise ValueError("eno3 needs at least two ghost cells")
        k = (-2, -1, 0, 1, 2)
        stencil = np.stack([widths[pad + o : pad + o + n] for o in k])
        values = np.stack([averages[pad + o : pad + o + n] for o in k])
        return eno3_coeffs(stencil, values)
    raise ValueError(f"unknown reconstruction {method!r}; expected one of {RECON_METHODS}")


def edge_values(coeffs: Coeffs) -> Tuple[np.ndarray, np.ndarray]:
    """Values at the left (s=-1/2) and right (s=+1/2) cell ends."""
    a, b, c = coeffs
    base = 0.25 * a + c
    return base - 0.5 * b, base + 0.5 * b
