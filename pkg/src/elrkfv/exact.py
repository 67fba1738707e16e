"""Reference solutions for the test problems."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy.optimize import bisect

from .errors import SolverError

NEWTON_TOL = 1e-13
NEWTON_MAXITER = 100


def exact_varcoeff(x, t):
    """Solution of ``u_t + (sin(x) u)_x = 0`` with ``u(x, 0) = 1``.

    Written as ``e^{-t} / (cos^2(x/2) + e^{-2t} sin^2(x/2))``, which equals
    ``sin(2 arctan(e^{-t} tan(x/2))) / sin(x)`` wherever the latter is defined
    and has no removable singularities.
    """
    x = np.asarray(x, dtype=float)
    k = np.exp(-t)
    return k / (np.cos(0.5 * x) ** 2 + (k * np.sin(0.5 * x)) ** 2)


def exact_burgers_newton(
    x: float,
    t: float,
    u0: Callable[[float], float],
    guess: float,
    du0: Optional[Callable[[float], float]] = None,
    bracket: Optional[tuple] = None,
) -> float:
    """Root of ``g(u) = u - u0(x - u t)`` by Newton's method.

    Falls back to bisection on ``bracket`` (the range of ``u0``) if Newton
    stalls. ``du0`` defaults to a central difference.
    """
    if t == 0:
        return float(u0(x))
    if du0 is None:
        def du0(s, h=1e-6):
            return (u0(s + h) - u0(s - h)) / (2 * h)

    def g(u):
        return u - u0(x - u * t)

    u = float(guess)
    for _ in range(NEWTON_MAXITER):
        r = g(u)
        if abs(r) <= NEWTON_TOL:
            return u
        dg = 1.0 + t * du0(x - u * t)
        if dg == 0 or not np.isfinite(dg):
            break
        u -= r / dg
        if not np.isfinite(u):
            break
    if bracket is not None:
        lo, hi = bracket
        if g(lo) * g(hi) <= 0:
            u = bisect(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            if abs(g(u)) <= 1e-12:
                return float(u)
    raise SolverError(f"no characteristic root found at x={x}, t={t}")


def _sin_foot(x, t):
    """Foot ``xi`` in ``[0, pi]`` with ``xi + t sin(xi) = x`` on the entropy branch."""
    xi_max = np.pi if t <= 1 else np.arccos(-1.0 / t)
    lo = np.zeros_like(x)
    hi = np.full_like(x, xi_max)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = mid + t * np.sin(mid) < x
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    xi = 0.5 * (lo + hi)
    for _ in range(2):
        dg = 1.0 + t * np.cos(xi)
        step = np.where(np.abs(dg) > 1e-8, (xi + t * np.sin(xi) - x) / np.where(dg == 0, 1, dg), 0.0)
        xi = np.clip(xi - step, 0.0, xi_max)
    return xi


def exact_burgers_sin(x, t):
    """Entropy solution for ``u0 = sin(x)``, periodic on ``[0, 2 pi]``.

    Odd symmetry about ``pi`` pins the shock there once it forms at ``t = 1``.
    """
    x = np.mod(np.asarray(x, dtype=float), 2 * np.pi)
    if t == 0:
        return np.sin(x)
    right = x > np.pi
    y = np.where(right, 2 * np.pi - x, x)
    u = np.sin(_sin_foot(y, float(t)))
    u = np.where(right, -u, u)
    return np.where(x == np.pi, 0.0, u)


def exact_burgers_smooth(x, t, u0, du0, bounds):
    """Pre-shock solution for general smooth ``u0`` by pointwise Newton."""
    x = np.asarray(x, dtype=float)
    flat = [exact_burgers_newton(float(xi), t, u0, float(u0(xi)), du0, bounds) for xi in x.ravel()]
    return np.array(flat).reshape(x.shape)


def exact_riemann(x, t, left: float, right: float):
    """Entropy solution of the Burgers Riemann problem with jump at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.where(x <= 0, left, right)
    if left > right:
        s = 0.5 * (left + right)
        return np.where(x < s * t, left, right)
    return np.clip(x / t, left, right)
