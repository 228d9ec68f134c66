"""State, geometry and grid types shared by the numerical modules.

Everything is SI. States are stored as pairs of numpy arrays (or scalars)
rather than arrays of per-cell objects so every operation vectorizes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DegenerateAreaError

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class PhysicalParams:
    """Blood density ``rho`` [kg/m^3], friction ``cf`` [m^2/s], external pressure ``p0`` [Pa]."""

    rho: float = 1060.0
    cf: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ValueError(f"rho must be > 0, got {self.rho!r}")
        if not (math.isfinite(self.cf) and self.cf >= 0):
            raise ValueError(f"cf must be >= 0, got {self.cf!r}")
        if not math.isfinite(self.p0):
            raise ValueError(f"p0 must be finite, got {self.p0!r}")


class ConservedState(NamedTuple):
    """Cross-section area ``a`` [m^2] and discharge ``q`` [m^3/s].

    Fields may be scalars or equally shaped arrays.
    """

    a: np.ndarray | float
    q: np.ndarray | float


def radius(a):
    """Radius of a circular section of area ``a``."""
    return np.sqrt(np.asarray(a, dtype=float) / math.pi)


def area(r):
    """Area of a circular section of radius ``r``."""
    return math.pi * np.asarray(r, dtype=float) ** 2


def cal_a0(k, a0):
    """Geometry variable ``k * sqrt(a0)``.

    This is the only place it is computed; the well-balanced property
    depends on every consumer seeing the same rounded values.
    """
    return np.asarray(k, dtype=float) * np.sqrt(np.asarray(a0, dtype=float))


def velocity(state: ConservedState):
    """Mean velocity ``q / a``; raises :class:`DegenerateAreaError` on dry cells."""
    a = np.asarray(state.a, dtype=float)
    if np.any(a <= 0):
        raise DegenerateAreaError("velocity undefined for a cell with a == 0")
    u = np.asarray(state.q, dtype=float) / a
    return u if u.ndim else float(u)


def pressure(state: ConservedState, k, a0, p0=0.0):
    """Transmural pressure law ``p0 + k (R - R0)``."""
    p = p0 + np.asarray(k, dtype=float) * (radius(state.a) - radius(a0))
    return p if p.ndim else float(p)


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``j_cells`` cells on ``[0, length]``."""

    j_cells: int
    length: float

    def __post_init__(self):
        if int(self.j_cells) != self.j_cells or self.j_cells < 2:
            raise ValueError(f"j_cells must be an integer >= 2, got {self.j_cells!r}")
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError(f"length must be > 0, got {self.length!r}")
        object.__setattr__(self, "j_cells", int(self.j_cells))

    @property
    def dx(self) -> float:
        return self.length / self.j_cells

    @property
    def x(self) -> np.ndarray:
        """Cell centres ``(i + 1/2) dx``."""
        return (np.arange(self.j_cells) + 0.5) * self.dx


@dataclass(frozen=True, eq=False)
class VesselGeometry:
    """Per-cell stiffness ``k`` [Pa/m] and rest section ``a0`` [m^2].

    ``calA0`` is derived once at construction.
    """

    k: np.ndarray
    a0: np.ndarray
    calA0: np.ndarray = field(init=False)

    def __post_init__(self):
        k = _readonly(self.k)
        a0 = _readonly(self.a0)
        if k.ndim != 1 or k.shape != a0.shape:
            raise ValueError("k and a0 must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(k)) and np.all(k > 0)):
            raise ValueError("k must be finite and > 0 in every cell")
        if not (np.all(np.isfinite(a0)) and np.all(a0 > 0)):
            raise ValueError("a0 must be finite and > 0 in every cell")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "calA0", _readonly(cal_a0(k, a0)))

    @classmethod
    def from_profiles(cls, grid: Grid1D, k_of_x, a0_of_x) -> "VesselGeometry":
        """Sample analytic profiles at the cell centres."""
        x = grid.x
        k = np.broadcast_to(np.asarray(k_of_x(x), dtype=float), x.shape)
        a0 = np.broadcast_to(np.asarray(a0_of_x(x), dtype=float), x.shape)
        return cls(k, a0)

    def __len__(self):
        return self.k.shape[0]


@dataclass
class SimulationState:
    """Time ``t`` and the per-cell conserved pair."""

    time: float
    cells: ConservedState

    @property
    def a(self) -> np.ndarray:
        return self.cells.a

    @property
    def q(self) -> np.ndarray:
        return self.cells.q

    def copy(self) -> "SimulationState":
        return SimulationState(
            self.time, ConservedState(np.array(self.cells.a), np.array(self.cells.q))
        )


@dataclass
class Snapshot:
    """Primitive and conserved fields at one output time."""

    t: float
    x: np.ndarray
    a: np.ndarray
    q: np.ndarray
    u: np.ndarray
    p: np.ndarray


@dataclass
class SnapshotSeries:
    """Snapshots of one run plus the fixed geometry they refer to.

    ``clamp_events``, ``steps`` and ``wall_time`` are totals for the run;
    ``mass_initial`` is ``sum(a) * dx`` at ``t = 0``.
    """

    grid: Grid1D
    geometry: VesselGeometry
    params: PhysicalParams
    snapshots: list[Snapshot] = field(default_factory=list)
    clamp_events: int = 0
    steps: int = 0
    wall_time: float = 0.0
    mass_initial: float = float("nan")

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, i) -> Snapshot:
        return self.snapshots[i]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    def at(self, t: float) -> Snapshot:
        """Snapshot whose time is closest to ``t``."""
        if not self.snapshots:
            raise LookupError("empty snapshot series")
        i = int(np.argmin(np.abs(self.times - t)))
        return self.snapshots[i]

    def make_snapshot(self, state: SimulationState) -> Snapshot:
        a = np.array(state.a, dtype=float)
        q = np.array(state.q, dtype=float)
        u = np.divide(q, a, out=np.zeros_like(a), where=a > 0)
        p = pressure(ConservedState(a, q), self.geometry.k, self.geometry.a0, self.params.p0)
        return Snapshot(float(state.time), self.grid.x, a, q, u, np.asarray(p))
