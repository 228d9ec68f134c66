"""Grid-refinement studies against an exact discharge."""
from __future__ import annotations

import math
from functools import partial
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic import damped_wave_discharge, damped_wave_params
from .config import SimulationConfig
from .errors import ArteryFlowError
from .flux import sound_speed
from .integrator import run
from .io import l2_error


@dataclass
class ConvergenceRow:
    j_cells: int
    l2_error: float
    order: float | None = None
    error: str | None = None


def damped_wave_reference(config: SimulationConfig) -> Callable:
    """Exact linear discharge ``Q(x, t)`` for a uniform vessel driven by a sine inflow."""
    problem = config.build()
    geom = problem.geometry
    if np.ptp(geom.k) != 0 or np.ptp(geom.a0) != 0 or config.left.waveform != "sine":
        raise ValueError("damped-wave reference needs uniform geometry and a sine inflow")
    a0 = float(geom.a0[0])
    c0 = sound_speed(a0, float(geom.k[0]), config.physics.rho)
    params = damped_wave_params(config.left.params["omega"], c0, config.physics.cf, a0,
                                config.left.params["q_amp"])
    return partial(damped_wave_discharge, params)


def _level(args):
    config, j, reference, x_max = args
    try:
        series = run(config.with_overrides({"grid.j_cells": j}))
    except ArteryFlowError as exc:
        return ConvergenceRow(j, math.nan, error=str(exc))
    final = series.snapshots[-1]
    mask = final.x <= x_max
    ref = reference(final.x[mask], final.t)
    return ConvergenceRow(j, l2_error(final.q[mask], ref, series.grid.dx))


def convergence_study(config: SimulationConfig, grids: Sequence[int], reference: Callable,
                      *, x_max: float | None = None, workers: int = 1) -> list[ConvergenceRow]:
    """L2 discharge error at ``t_end`` per grid, and observed orders.

    The order between consecutive levels is ``log(e1/e2) / log(J2/J1)``
    (``log2(e_J / e_2J)`` for doubling). A level that fails is reported with
    ``l2_error = nan`` and its message; the remaining levels still run.
    """
    if not grids:
        raise ValueError("need at least one grid level")
    x_max = math.inf if x_max is None else x_max
    jobs = [(config, int(j), reference, x_max) for j in grids]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_level, jobs))
    else:
        rows = [_level(job) for job in jobs]
    for prev, row in zip(rows, rows[1:]):
        if prev.l2_error > 0 and row.l2_error > 0:
            row.order = math.log(prev.l2_error / row.l2_error) / math.log(row.j_cells / prev.j_cells)
    return rows


def write_table(rows: Sequence[ConvergenceRow], path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write("J,l2_error,order,error\n")
        for r in rows:
            order = "" if r.order is None else format(r.order, ".17g")
            fh.write(f"{r.j_cells},{format(r.l2_error, '.17g')},{order},{r.error or ''}\n")
