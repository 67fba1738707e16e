"""Flux functions, boundary velocities and forward tracing of cell ends."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class FluxSpec:
    """Either Burgers' flux ``u^2/2`` or linear transport ``a(x) u``."""

    kind: str
    speed: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind not in ("burgers", "linear"):
            raise ValueError(f"unsupported flux kind {self.kind!r}")
        if self.kind == "linear" and self.speed is None:
            raise ValueError("linear flux needs a speed function a(x)")

    @classmethod
    def burgers(cls) -> "FluxSpec":
        return cls("burgers")

    @classmethod
    def linear(cls, speed: Callable[[np.ndarray], np.ndarray]) -> "FluxSpec":
        return cls("linear", speed)

    @property
    def is_burgers(self) -> bool:
        return self.kind == "burgers"

    def a(self, x):
        return np.asarray(self.speed(np.asarray(x, dtype=float)), dtype=float) + 0.0 * np.asarray(x, dtype=float)

    def f(self, u, x=0.0):
        u = np.asarray(u, dtype=float)
        if self.is_burgers:
            return 0.5 * u * u
        return self.a(x) * u

    def df(self, u, x=0.0):
        u = np.asarray(u, dtype=float)
        if self.is_burgers:
            return u
        return self.a(x) + 0.0 * u


BURGERS = FluxSpec.burgers()


def rh_velocity(u_left, u_right, flux: FluxSpec = BURGERS, x_node=0.0):
    """Secant slope of the flux across a node.

    For Burgers the secant ``(f(u_r) - f(u_l)) / (u_r - u_l)`` equals
    ``(u_l + u_r) / 2`` identically, and that form also covers ``u_l == u_r``
    where it reduces to ``f'(u_l)``. For linear transport the node moves with
    the local speed ``a(x_node)``.
    """
    if flux.is_burgers:
        return 0.5 * (np.asarray(u_left, dtype=float) + np.asarray(u_right, dtype=float))
    return flux.a(x_node) + 0.0 * np.asarray(u_left, dtype=float)


def trace_forward(x, nu, dt):
    if np.any(np.asarray(dt) < 0):
        raise ValueError("dt must be non-negative")
    return x + nu * dt


def crossing_within(dx_cell, nu_left, nu_right, horizon) -> bool:
    """True when the two ends of a cell of width ``dx_cell`` cross before ``horizon``."""
    return bool(dx_cell + horizon * (nu_right - nu_left) < 0)
