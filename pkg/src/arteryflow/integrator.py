"""Time stepping: CFL step, convective prediction, friction correction."""
from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import get_backend
from .boundary import BoundaryDriver
from .core import (ConservedState, Grid1D, PhysicalParams, SimulationState,
                   SnapshotSeries, VesselGeometry)
from .errors import AllDryError, NumericalFailure

FLUX_KINDS = {"hll": 0, "rusanov": 1}


@dataclass
class StepReport:
    dt_used: float
    max_wave_speed: float
    mass_total: float
    clamp_events: int = 0


@dataclass
class Problem:
    """Everything needed to run: built from a config or by hand."""

    grid: Grid1D
    geometry: VesselGeometry
    params: PhysicalParams
    initial: SimulationState
    left: BoundaryDriver
    right: BoundaryDriver
    t_end: float
    snapshots: Sequence[float] = ()
    n_cfl: float = 1.0
    flux: str = "hll"


def friction_correct(predicted: ConservedState, params: PhysicalParams, dt: float) -> ConservedState:
    """Semi-implicit friction on the predicted state.

    Solves ``a* (u - u*) / dt = -cf u`` for ``u``; the area is untouched and
    dry cells are left as they are.
    """
    a = np.asarray(predicted.a, dtype=float)
    q = np.asarray(predicted.q, dtype=float)
    if params.cf == 0 or dt == 0:
        return ConservedState(a, q)
    wet = a > 0
    denom = np.ones_like(a)
    np.divide(params.cf * dt, a, out=denom, where=wet)
    denom[wet] += 1.0
    return ConservedState(a, q / denom)


class Solver:
    """Advances a state on fixed geometry and boundary closures.

    Extended (ghost-padded) work arrays are allocated once; the geometry of
    the ghost cells copies the adjacent interior cell.
    """

    def __init__(self, grid: Grid1D, geometry: VesselGeometry, params: PhysicalParams,
                 left: BoundaryDriver, right: BoundaryDriver, *, flux="hll",
                 n_cfl=1.0, backend=None):
        if len(geometry) != grid.j_cells:
            raise ValueError(f"geometry has {len(geometry)} cells, grid has {grid.j_cells}")
        if not 0 < n_cfl <= 1:
            raise ValueError(f"n_cfl must lie in (0, 1], got {n_cfl!r}")
        if flux not in FLUX_KINDS:
            raise ValueError(f"unknown flux {flux!r}; expected one of {sorted(FLUX_KINDS)}")
        if left.side != "left" or right.side != "right":
            raise ValueError("boundary drivers must be given as (left, right)")
        self.grid = grid
        self.geometry = geometry
        self.params = params
        self.left = left
        self.right = right
        self.n_cfl = float(n_cfl)
        self.flux = flux
        self.kernels = get_backend(backend)
        self._kind = FLUX_KINDS[flux]
        self._speed = self.kernels.max_wave_speed
        self._update = self.kernels.convective_update
        self._rho = float(params.rho)
        self._dx = grid.dx
        # ghost geometry copies the adjacent cell
        self._k = np.concatenate(([geometry.k[0]], geometry.k, [geometry.k[-1]]))
        self._cal = np.concatenate(([geometry.calA0[0]], geometry.calA0, [geometry.calA0[-1]]))
        self._a = np.empty(grid.j_cells + 2)
        self._q = np.empty(grid.j_cells + 2)
        self._k_int = np.ascontiguousarray(geometry.k)

    def _load(self, cells: ConservedState, t: float):
        a, q = self._a, self._q
        a[1:-1] = cells.a
        q[1:-1] = cells.q
        a[0], q[0] = self.left.ghost(a[1], q[1], t)
        a[-1], q[-1] = self.right.ghost(a[-2], q[-2], t)

    def max_wave_speed(self, cells: ConservedState) -> float:
        a, q = cells
        try:
            return self._speed(a, q, self._k_int, self._rho)
        except (TypeError, ValueError):  # not contiguous float64
            a = np.ascontiguousarray(a, dtype=float)
            q = np.ascontiguousarray(q, dtype=float)
            return self._speed(a, q, self._k_int, self._rho)

    def timestep(self, state: SimulationState) -> tuple[float, float]:
        """``(dt, max wave speed)`` from the CFL bound."""
        smax = self.max_wave_speed(state.cells)
        if not math.isfinite(smax):
            raise NumericalFailure("non-finite wave speed", state.time)
        if smax <= 0:
            raise AllDryError("all cells dry, CFL time step undefined", state.time)
        return self.n_cfl * self._dx / smax, smax

    def predict(self, state: SimulationState, dt: float) -> tuple[ConservedState, int]:
        """Convective step without friction; returns ``(U*, clamp count)``."""
        self._load(state.cells, state.time)
        j = self.grid.j_cells
        a_out = np.empty(j)
        q_out = np.empty(j)
        clamps = self._update(self._a, self._q, self._k, self._cal, self._rho,
                              dt / self._dx, self._kind, a_out, q_out)
        return ConservedState(a_out, q_out), int(clamps)

    def step(self, state: SimulationState, dt_max: float = math.inf):
        """One CFL-limited step, never longer than ``dt_max``."""
        dt, smax = self.timestep(state)
        if dt_max < dt:
            dt = max(dt_max, 0.0)
        if dt == 0:
            cells = ConservedState(np.array(state.a), np.array(state.q))
            return (SimulationState(state.time, cells),
                    StepReport(0.0, smax, float(np.sum(cells.a)) * self._dx, 0))
        predicted, clamps = self.predict(state, dt)
        cells = friction_correct(predicted, self.params, dt) if self.params.cf else predicted
        mass = float(cells.a.sum()) * self._dx
        if not (math.isfinite(mass) and math.isfinite(float(cells.q.sum()))):
            raise NumericalFailure("NaN/Inf produced by the time step", state.time)
        return SimulationState(state.time + dt, cells), StepReport(dt, smax, mass, clamps)


def predict(state: SimulationState, geometry: VesselGeometry, params: PhysicalParams, dt: float,
            dx: float, left: BoundaryDriver, right: BoundaryDriver, *, flux="hll",
            backend=None) -> ConservedState:
    """Functional form of :meth:`Solver.predict`."""
    grid = Grid1D(len(geometry), dx * len(geometry))
    solver = Solver(grid, geometry, params, left, right, flux=flux, backend=backend)
    return solver.predict(state, dt)[0]


def step(state: SimulationState, geometry: VesselGeometry, params: PhysicalParams,
         grid: Grid1D, bc: tuple[BoundaryDriver, BoundaryDriver], n_cfl: float = 1.0,
         dt_max: float = math.inf, *, flux="hll", backend=None):
    """Functional form of :meth:`Solver.step`."""
    solver = Solver(grid, geometry, params, bc[0], bc[1], flux=flux, n_cfl=n_cfl, backend=backend)
    return solver.step(state, dt_max)


def _schedule(times, t_end):
    out = sorted({float(t) for t in times if 0 <= t <= t_end} | {0.0, float(t_end)})
    return out


def run(problem, snapshots: Sequence[float] | None = None, *, backend=None,
        max_steps: int | None = None, on_step=None) -> SnapshotSeries:
    """Integrate ``problem`` to its end time and collect snapshots.

    ``problem`` is a :class:`Problem` or anything with a ``build()`` method
    returning one (a ``SimulationConfig``). Snapshot times are hit exactly by
    shortening the step that would cross them; ``0`` and ``t_end`` are
    always recorded. ``on_step(state, report)`` is called after each step.
    """
    if not isinstance(problem, Problem):
        problem = problem.build()
    times = _schedule(problem.snapshots if snapshots is None else snapshots, problem.t_end)
    solver = Solver(problem.grid, problem.geometry, problem.params, problem.left, problem.right,
                    flux=problem.flux, n_cfl=problem.n_cfl, backend=backend)
    series = SnapshotSeries(problem.grid, problem.geometry, problem.params)
    state = problem.initial.copy()
    state.time = 0.0
    series.mass_initial = float(np.sum(state.a)) * problem.grid.dx
    started = _time.perf_counter()
    steps = 0
    clamps = 0
    for target in times:
        while state.time < target:
            remaining = target - state.time
            state, report = solver.step(state, remaining)
            if report.dt_used >= remaining:
                state.time = target
            steps += 1
            clamps += report.clamp_events
            if on_step is not None:
                on_step(state, report)
            if max_steps is not None and steps > max_steps:
                raise NumericalFailure(f"exceeded {max_steps} steps", state.time)
        series.snapshots.append(series.make_snapshot(state))
    series.steps = steps
    series.clamp_events = clamps
    series.wall_time = _time.perf_counter() - started
    return series
