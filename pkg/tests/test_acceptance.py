"""Acceptance criteria, one PASS/FAIL line each (run with ``pytest -s`` or see the log)."""
import math

import numpy as np
import pytest

from arteryflow.analytic import (damped_wave_params, dead_man_state, envelope_decay_rate,
                                 interface_coefficients, measure_pulse_amplitudes)
from arteryflow.boundary import BoundaryDriver
from arteryflow.convergence import convergence_study, damped_wave_reference
from arteryflow.core import ConservedState, Grid1D, PhysicalParams, SimulationState, VesselGeometry, area
from arteryflow.flux import hll_flux, physical_flux, rusanov_flux, sound_speed
from arteryflow.integrator import Solver, run
from arteryflow.io import l2_error
from arteryflow.scenarios import (build_damped_wave, build_dead_man, build_stented_reflection,
                                  radius_bump)

from conftest import A0_PAPER, RHO

CF = 0.005053
TOL_EQ = 1e-13


@pytest.fixture
def report(capsys):
    def emit(n, name, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {name}: {detail}")
        return ok
    return emit


def equilibrium_errors(snapshots, a0):
    q = max(float(np.max(np.abs(s.q))) for s in snapshots)
    a = max(float(np.max(np.abs(s.a / a0 - 1.0))) for s in snapshots)
    return q, a


# -- shared runs -------------------------------------------------------------


@pytest.fixture(scope="module")
def dead_man_series():
    return run(build_dead_man())


@pytest.fixture(scope="module")
def stented_series():
    return run(build_stented_reflection())


ENVELOPE_TIMES = tuple(np.linspace(4.5, 5.0, 101))


@pytest.fixture(scope="module")
def damped_runs():
    out = {}
    for cf in (0.0, CF):
        cfg = build_damped_wave(cf=cf, **{"run.snapshots": ENVELOPE_TIMES})
        out[cf] = (cfg, run(cfg))
    return out


def relative_l2(cfg, series):
    final = series.snapshots[-1]
    mask = final.x <= 0.9 * cfg.length
    ref = damped_wave_reference(cfg)(final.x[mask], final.t)
    dx = series.grid.dx
    return l2_error(final.q[mask], ref, dx) / l2_error(ref, 0.0, dx)


# -- criteria ------------------------------------------------------------------------


def test_1_dead_man_preserved(dead_man_series, report):
    s = dead_man_series
    q, a = equilibrium_errors(s.snapshots, s.geometry.a0)
    ok = q <= TOL_EQ and a <= TOL_EQ and s.wall_time < 1.0 and len(s) == 11
    assert report(1, "well-balanced dead_man", ok,
                  f"max|Q|={q:.3e} max|A/A0-1|={a:.3e} steps={s.steps} runtime={s.wall_time:.3f}s")


def random_smooth_geometry(rng, j):
    x = (np.arange(j) + 0.5) / j
    def series(base, rel):
        modes = rng.integers(1, 5, size=3)
        amp = rng.uniform(-rel, rel, size=3) / 3
        phase = rng.uniform(0, 2 * math.pi, size=3)
        return base * (1 + sum(a * np.sin(2 * math.pi * m * x + p) for a, m, p in zip(amp, modes, phase)))
    k = series(rng.uniform(8e7, 2e8), 0.6)
    a0 = area(series(rng.uniform(3e-3, 5e-3), 0.3))
    return VesselGeometry(k, a0)


def test_2_generalized_equilibrium(report):
    # closed vessel: transmissive ends on a sloped geometry carry a growing boundary mode
    rng = np.random.default_rng(7)
    worst_q = worst_a = 0.0
    params = PhysicalParams(RHO)
    for _ in range(24):
        j = int(rng.integers(30, 200))
        geom = random_smooth_geometry(rng, j)
        grid = Grid1D(j, float(rng.uniform(0.05, 1.0)))
        solver = Solver(grid, geom, params, BoundaryDriver("wall", "left"),
                        BoundaryDriver("wall", "right"))
        state = dead_man_state(geom, 0.0)
        snaps = []
        for _ in range(1000):
            state, _ = solver.step(state)
            snaps.append(state)
        q, a = equilibrium_errors(snaps, geom.a0)
        worst_q, worst_a = max(worst_q, q), max(worst_a, a)
    ok = worst_q <= TOL_EQ and worst_a <= TOL_EQ
    assert report(2, "generalized equilibrium (24 geometries, wall ends)", ok,
                  f"max|Q|={worst_q:.3e} max|A/A0-1|={worst_a:.3e}")


def test_3_mass_conservation(report):
    j, length = 750, 3.0
    grid = Grid1D(j, length)
    geom = VesselGeometry(np.full(j, 1e8), np.full(j, A0_PAPER))
    r = radius_bump(grid.x, 4e-3, 5e-2, 1.2, 1.8)
    state = SimulationState(0.0, ConservedState(area(r), np.zeros(j)))
    solver = Solver(grid, geom, PhysicalParams(RHO, CF), BoundaryDriver("wall", "left"),
                    BoundaryDriver("wall", "right"))
    m0 = float(np.sum(state.a)) * grid.dx
    drift = 0.0
    for _ in range(10_000):
        state, rep = solver.step(state)
        drift = max(drift, abs(rep.mass_total - m0) / m0)
    assert report(3, "mass conservation (walls, 1e4 steps)", drift <= 1e-12,
                  f"max relative drift={drift:.3e} t={state.time:.3f}s")


def test_4_flux_consistency(report, rng):
    n = 20_000
    k = rng.uniform(5e7, 5e8, n)
    a = A0_PAPER * rng.uniform(0.25, 4.0, n)
    u = rng.uniform(-30.0, 30.0, n)
    u[::10] = 0.0
    st = ConservedState(a, a * u)
    exact = np.stack(physical_flux(st, k, RHO))
    worst = {}
    for name, fn in (("hll", hll_flux), ("rusanov", rusanov_flux)):
        got = np.stack(fn(st, st, k, RHO))
        scale = np.where(exact == 0, 1.0, np.abs(exact))
        worst[name] = float(np.max(np.abs(got - exact) / scale))
    ok = all(v <= 1e-14 for v in worst.values())
    assert report(4, f"flux consistency ({n} states)", ok,
                  " ".join(f"{k_}={v:.2e}" for k_, v in worst.items()))


BAND = (0.076, 0.08)
WINDOW = (1.5e-3, 5e-3)


def stented_coefficients():
    c_l = sound_speed(A0_PAPER, 1.6e8, RHO)
    c_r = sound_speed(A0_PAPER, 1e8, RHO)
    return c_l, c_r, interface_coefficients(c_l, c_r)


def test_5_reflection_transmission(stented_series, report):
    s = stented_series
    c_l, c_r, co = stented_coefficients()
    amps = measure_pulse_amplitudes(s, BAND, WINDOW)
    rp, tp = amps.pressure_ratios()
    rr, tr = amps.radius_ratios()
    checks = [(rp, co.reflection), (tp, co.transmission),
              (rr, co.reflection), (tr, co.radius_transmission)]
    errs = [abs(m / e - 1) for m, e in checks]
    ok = max(errs) <= 0.05 and s.wall_time < 10.0
    assert report(5, "reflection/transmission stented_reflection", ok,
                  f"cL={c_l:.2f} cR={c_r:.2f} pressure R={rp:.4f}/{co.reflection:.4f} "
                  f"T={tp:.4f}/{co.transmission:.4f} radius R={rr:.4f}/{co.reflection:.4f} "
                  f"T={tr:.4f}/{co.radius_transmission:.4f} max rel err={max(errs):.2%} "
                  f"runtime={s.wall_time:.2f}s")


@pytest.mark.xfail(strict=True, reason="radius transmission is T*kR/kL = 0.698, not 1.117; see decisions ledger")
def test_5_literal_radius_transmission(stented_series, report):
    _, _, co = stented_coefficients()
    _, tr = measure_pulse_amplitudes(stented_series, BAND, WINDOW).radius_ratios()
    err = abs(tr / co.transmission - 1)
    assert report("5-literal", "radius transmission vs 1.117 (known deviation)", err <= 0.05,
                  f"measured {tr:.4f} vs {co.transmission:.4f} rel err={err:.1%}")


def test_6_damped_inviscid(damped_runs, report):
    cfg, s = damped_runs[0.0]
    err = relative_l2(cfg, s)
    assert report(6, "damped wave inviscid", err <= 0.05, f"relative L2 (x<=0.9L)={err:.3%}")


def test_7_damped_viscous(damped_runs, report):
    cfg, s = damped_runs[CF]
    err = relative_l2(cfg, s)
    window = [snap for snap in s.snapshots if snap.t >= 4.5]
    x = window[0].x
    mask = x <= 0.9 * cfg.length
    env = np.max([np.abs(snap.q[mask]) for snap in window], axis=0)
    rate = envelope_decay_rate(x[mask], env)
    p = damped_wave_params(2 * math.pi / 0.5, sound_speed(A0_PAPER, 1e8, RHO), CF, A0_PAPER)
    rate_err = abs(rate / p.k_i - 1)
    ok = err <= 0.10 and rate_err <= 0.15 and len(window) == 101
    assert report(7, "damped wave viscous", ok,
                  f"relative L2={err:.3%} decay rate={rate:.4f} k_i={p.k_i:.4f} rel err={rate_err:.2%}")


def test_8_convergence_order(report):
    cfg = build_damped_wave(cf=0.0)
    rows = convergence_study(cfg, [375, 750, 1500], damped_wave_reference(cfg), x_max=0.9 * cfg.length)
    orders = [r.order for r in rows[1:]]
    ok = all(o is not None and 0.7 <= o <= 1.2 for o in orders)
    assert report(8, "convergence order", ok,
                  " ".join(f"J={r.j_cells} L2={r.l2_error:.3e}" for r in rows)
                  + " orders=" + ",".join(f"{o:.3f}" for o in orders))


def test_9_robustness(dead_man_series, stented_series, damped_runs, report):
    runs = {"dead_man": dead_man_series, "stented_reflection": stented_series,
            "damped_wave cf=0": damped_runs[0.0][1], f"damped_wave cf={CF}": damped_runs[CF][1]}
    bad = {}
    for name, s in runs.items():
        nan = sum(int(not (np.all(np.isfinite(sn.a)) and np.all(np.isfinite(sn.q)))) for sn in s.snapshots)
        bad[name] = (nan, s.clamp_events)
    ok = all(v == (0, 0) for v in bad.values())
    assert report(9, "robustness at n_CFL=1", ok,
                  "; ".join(f"{k} nan={v[0]} clamps={v[1]}" for k, v in bad.items()))
