"""Troubled-cell detection and the cell-merging procedure for Burgers' equation."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .characteristics import crossing_within
from .errors import MergeError
from .grid import CellAverageField, MergedGrid, Periodic, UniformGrid1D, ghost_pad

WINDOW = 3
# merged cells thinner than this fraction of dx at the horizon count as crossed
MIN_WIDTH_FRACTION = 1e-8


class TroubledType(enum.IntEnum):
    I = 1
    II = 2
    III = 3
    IV = 4
    V = 5


@dataclass(frozen=True)
class Bounds:
    """Upper bound ``a`` and lower bound ``b`` of the data."""

    upper: float
    lower: float
    mode: str = "global"

    def __post_init__(self):
        if self.upper < self.lower:
            raise ValueError(f"upper bound {self.upper} below lower bound {self.lower}")
        if self.mode not in ("global", "local"):
            raise ValueError(f"unknown bounds mode {self.mode!r}")

    @classmethod
    def of(cls, values, mode: str = "global") -> "Bounds":
        values = np.asarray(values, dtype=float)
        return cls(float(values.max()), float(values.min()), mode)

    @property
    def spread(self) -> float:
        return self.upper - self.lower

    @property
    def lam(self) -> float:
        """Largest admissible ``dt/dx`` for the first-order theory, ``4/(a-b)``."""
        return np.inf if self.spread == 0 else 4.0 / self.spread


@dataclass(frozen=True)
class InfluenceRegion:
    anchor: int
    lo: int
    hi: int

    def __post_init__(self):
        if not (self.lo <= self.anchor <= self.hi) or self.hi - self.lo not in (3, 4, 5):
            raise ValueError(f"malformed influence region {self}")


def threshold(lam: float, threshold_mode: str) -> float:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if threshold_mode == "first_order":
        return 2.0 / lam
    if threshold_mode == "high_order":
        return 1.0 / lam
    raise ValueError(f"unknown threshold mode {threshold_mode!r}")


def classify_triples(um, u0, up, theta) -> np.ndarray:
    """Troubled type code (0 for none) from neighbouring averages, vectorised."""
    um, u0, up = (np.asarray(v, dtype=float) for v in (um, u0, up))
    t1 = um > up + theta
    t2 = ~t1 & (um > u0 + theta) & (um >= up) & (up >= u0)
    t3 = ~t1 & (u0 > up + theta) & (u0 >= um) & (um >= up)
    t4 = ~t1 & ~t2 & (um > u0 + theta)
    t5 = ~t1 & ~t3 & (u0 > up + theta)
    codes = np.zeros(np.broadcast(um, u0, up).shape, dtype=int)
    for code, hit in ((5, t5), (4, t4), (3, t3), (2, t2), (1, t1)):
        codes = np.where(hit, code, codes)
    return codes


def classify(
    field: CellAverageField, j: int, lam: float, threshold_mode: str = "first_order"
) -> Optional[TroubledType]:
    padded = ghost_pad(field, 1)
    code = int(classify_triples(padded[j], padded[j + 1], padded[j + 2], threshold(lam, threshold_mode)))
    return TroubledType(code) if code else None


def classify_padded(padded: np.ndarray, pad: int, theta: float) -> np.ndarray:
    n = padded.size - 2 * pad
    return classify_triples(
        padded[pad - 1 : pad - 1 + n], padded[pad : pad + n], padded[pad + 1 : pad + 1 + n], theta
    )


def effective_troubled(
    troubled: Sequence[Tuple[int, TroubledType]], n_periodic: Optional[int] = None
) -> List[Tuple[int, TroubledType]]:
    """Keep the left-most troubled cell of every 3-cell stencil, scanning left to right.

    A troubled cell is dropped when it shares a stencil ``{k-1, k, k+1}`` with
    the last kept cell, i.e. lies at most two cells to its right. With
    ``n_periodic`` the scan starts after a gap of at least three cells so the
    wrap-around is handled consistently.
    """
    items = sorted(troubled, key=lambda item: item[0])
    if not items:
        return []
    order = list(range(len(items)))
    if n_periodic is not None:
        idx = [i for i, _ in items]
        gaps = [idx[k] - (idx[k - 1] if k else idx[-1] - n_periodic) for k in range(len(idx))]
        start = next((k for k, g in enumerate(gaps) if g >= WINDOW), 0)
        order = order[start:] + order[:start]
    kept: List[Tuple[int, TroubledType]] = []
    last = None
    for k in order:
        idx, ttype = items[k]
        unrolled = idx
        if n_periodic is not None and last is not None and idx < items[order[0]][0]:
            unrolled = idx + n_periodic
        if last is None or unrolled - last > 2:
            kept.append((idx, ttype))
            last = unrolled
    return kept


def _region_for(padded, pad, j, ttype, upper, lower) -> InfluenceRegion:
    u = lambda k: padded[pad + j + k]  # noqa: E731
    if ttype == TroubledType.IV:
        return InfluenceRegion(j, j - 2, j + 1)
    central = u(-1) + u(0) + u(1)
    if central > (7 * upper + 5 * lower) / 4 and (
        u(2) < (upper + 3 * lower) / 4 or u(2) + u(3) < (upper + 3 * lower) / 2
    ):
        return InfluenceRegion(j, j - 2, j + 3)
    if central < (5 * upper + 7 * lower) / 4 and (
        u(-2) > (3 * upper + lower) / 4 or u(-3) + u(-2) > (3 * upper + lower) / 2
    ):
        return InfluenceRegion(j, j - 3, j + 2)
    return InfluenceRegion(j, j - 2, j + 2)


def influence_region(
    field: CellAverageField, j: int, ttype: TroubledType, bounds: Bounds
) -> InfluenceRegion:
    padded = ghost_pad(field, WINDOW)
    return influence_region_padded(padded, WINDOW, j, ttype, bounds)


def influence_region_padded(padded, pad: int, j: int, ttype, bounds: Bounds) -> InfluenceRegion:
    if bounds.mode == "local":
        window = padded[pad + j - WINDOW : pad + j + WINDOW + 1]
        upper, lower = float(window.max()), float(window.min())
    else:
        upper, lower = bounds.upper, bounds.lower
    return _region_for(padded, pad, j, TroubledType(ttype), upper, lower)


def _blocks(joined: np.ndarray, n: int, periodic: bool) -> np.ndarray:
    """Cut-node indices delimiting merged cells (unrolled for periodic lines)."""
    if periodic:
        cuts = np.flatnonzero(~joined[:n])
        if cuts.size == 0:
            raise MergeError("merging swallowed the whole periodic domain")
        return np.append(cuts, cuts[0] + n)
    return np.flatnonzero(~joined)


def merge(
    grid: UniformGrid1D,
    field: CellAverageField,
    regions: Iterable[InfluenceRegion],
    node_velocities,
    dt: float,
    horizon: Optional[float] = None,
    strict: bool = False,
    index_offset: int = 0,
) -> MergedGrid:
    """Merge influence regions into single cells and return the partition.

    Overlapping regions are joined transitively. Afterwards every merged cell
    is checked for crossing ends over ``horizon`` (default ``dt``); an
    offending cell absorbs whichever neighbour leaves the wider result, and
    the check repeats until no cell crosses. ``strict`` raises instead.
    """
    n = grid.n_cells
    dx = grid.dx
    periodic = isinstance(field.bc, Periodic)
    nu = np.asarray(node_velocities, dtype=float)
    if nu.shape != (n + 1,):
        raise ValueError(f"expected {n + 1} node velocities, got {nu.shape}")
    horizon = dt if horizon is None else horizon

    joined = np.zeros(n + 1, dtype=bool)
    for region in regions:
        if periodic:
            joined[np.arange(region.lo + 1, region.hi + 1) % n] = True
        else:
            lo, hi = max(region.lo, 0), min(region.hi, n - 1)
            joined[lo + 1 : hi + 1] = True
    joined[n] = joined[0] if periodic else False
    if not periodic:
        joined[0] = False

    def node_nu(c):
        return nu[c % n] if periodic else nu[c]

    def horizon_width(lo, hi):
        return (hi - lo) * dx + horizon * (node_nu(hi) - node_nu(lo))

    while True:
        cuts = _blocks(joined, n, periodic)
        widths = [horizon_width(cuts[i], cuts[i + 1]) for i in range(cuts.size - 1)]
        bad = next((i for i, w in enumerate(widths) if not w > MIN_WIDTH_FRACTION * dx), None)
        if bad is None:
            break
        if strict:
            raise MergeError(
                f"merged cell {bad} (nodes {cuts[bad]}..{cuts[bad + 1]}) still crosses within the step"
            )
        n_blocks = cuts.size - 1
        options = []
        if periodic:
            if n_blocks == 1:
                raise MergeError("time step too large: no partition avoids crossing")
            left_lo = cuts[bad - 1] if bad > 0 else cuts[-2] - n
            right_hi = cuts[bad + 2] if bad + 2 < cuts.size else cuts[1] + n
            options.append((horizon_width(left_lo, cuts[bad + 1]), cuts[bad] % n))
            options.append((horizon_width(cuts[bad], right_hi), cuts[bad + 1] % n))
        else:
            if bad > 0:
                options.append((horizon_width(cuts[bad - 1], cuts[bad + 1]), cuts[bad]))
            if bad + 2 < cuts.size:
                options.append((horizon_width(cuts[bad], cuts[bad + 2]), cuts[bad + 1]))
            if not options:
                raise MergeError("time step too large: no partition avoids crossing")
        _, node = max(options, key=lambda item: item[0])
        joined[node] = True
        if periodic:
            joined[n] = joined[0]

    if cuts.size == 2 and n > 1:
        raise MergeError("merging swallowed the whole domain: time step too large for any partition")
    start = cuts[0]
    values = np.roll(np.asarray(field.values, dtype=float), -start) if periodic else np.asarray(field.values, dtype=float)
    offsets = cuts[:-1] - start
    masses = dx * np.add.reduceat(values, offsets)
    members = tuple(
        (np.arange(cuts[i], cuts[i + 1]) % n if periodic else np.arange(cuts[i], cuts[i + 1])) + index_offset
        for i in range(cuts.size - 1)
    )
    return MergedGrid(
        boundaries=grid.x_lo + dx * cuts,
        node_velocities=np.array([node_nu(c) for c in cuts]),
        members=members,
        masses=masses,
        bc=field.bc,
        dx=dx,
        period=grid.length if periodic else None,
    )


def crossing_cells(merged: MergedGrid, horizon: float) -> List[int]:
    """Indices of merged cells whose ends cross within ``horizon``."""
    widths0 = np.diff(merged.boundaries)
    return [
        m
        for m in range(merged.n_cells)
        if crossing_within(widths0[m], merged.node_velocities[m], merged.node_velocities[m + 1], horizon)
    ]
