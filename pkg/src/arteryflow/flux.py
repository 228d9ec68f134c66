"""Physical flux, wave speeds, two-point numerical fluxes and the CFL bound.

All functions accept scalars or numpy arrays (broadcast element-wise).
Dry states (``a == 0``) are given zero velocity, zero sound speed and zero
flux so the numerical fluxes are total on clamped reconstructions.

The arithmetic here is mirrored operation for operation by the compiled
kernel in ``_kernels.pyx``; keep the two in step.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import SQRT_PI, ConservedState, SimulationState, VesselGeometry
from .errors import AllDryError, DegenerateAreaError, InconsistentStateError


class FluxVector(NamedTuple):
    f_mass: np.ndarray | float
    f_momentum: np.ndarray | float


class WaveSpeedPair(NamedTuple):
    c1: np.ndarray | float
    c2: np.ndarray | float


def _out(x):
    return x if np.ndim(x) else float(x)


def sound_speed(a, k, rho):
    """Pulse wave speed ``sqrt(k sqrt(a) / (2 rho sqrt(pi)))``, i.e. ``sqrt(k R / (2 rho))``."""
    a = np.asarray(a, dtype=float)
    return _out(np.sqrt(k * np.sqrt(a) / (2.0 * rho * SQRT_PI)))


def pressure_flux(a, k, rho):
    """Pressure part ``k a^{3/2} / (3 sqrt(pi) rho)`` of the momentum flux."""
    a = np.asarray(a, dtype=float)
    return _out(k * (a * np.sqrt(a)) / (3.0 * SQRT_PI * rho))


def _wet_velocity(a, q):
    a = np.asarray(a, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.divide(q, a, out=np.zeros(np.broadcast(a, q).shape), where=a > 0)


def physical_flux(state: ConservedState, k, rho) -> FluxVector:
    """Flux ``(q, q^2/a + k a^{3/2} / (3 sqrt(pi) rho))``; ``(0, 0)`` for a dry state."""
    a = np.asarray(state.a, dtype=float)
    q = np.asarray(state.q, dtype=float)
    dry = a == 0
    if np.any(dry & (q != 0)):
        raise InconsistentStateError("dry cell (a == 0) with non-zero discharge")
    with np.errstate(divide="ignore", invalid="ignore"):
        mom = np.where(dry, 0.0, q * q / a + pressure_flux(a, k, rho))
    return FluxVector(_out(q + 0.0 * a), _out(mom))


def eigenvalues(state: ConservedState, k, rho) -> WaveSpeedPair:
    """Characteristic speeds ``u - c`` and ``u + c``."""
    a = np.asarray(state.a, dtype=float)
    if np.any(a <= 0):
        raise DegenerateAreaError("eigenvalues undefined for a == 0")
    u = np.asarray(state.q, dtype=float) / a
    c = sound_speed(a, k, rho)
    return WaveSpeedPair(_out(u - c), _out(u + c))


def _speed_bounds(ul: ConservedState, ur: ConservedState, k_star, rho):
    vl = _wet_velocity(ul.a, ul.q)
    vr = _wet_velocity(ur.a, ur.q)
    cl = sound_speed(ul.a, k_star, rho)
    cr = sound_speed(ur.a, k_star, rho)
    return vl, vr, cl, cr


def hll_flux(ul: ConservedState, ur: ConservedState, k_star, rho) -> FluxVector:
    """HLL flux with both wave-speed bounds evaluated at ``k_star``."""
    fl = physical_flux(ul, k_star, rho)
    fr = physical_flux(ur, k_star, rho)
    vl, vr, cl, cr = _speed_bounds(ul, ur, k_star, rho)
    c1 = np.minimum(vl - cl, vr - cr)
    c2 = np.maximum(vl + cl, vr + cr)
    out = []
    with np.errstate(divide="ignore", invalid="ignore"):
        for f_l, f_r, u_l, u_r in zip(fl, fr, ul, ur):
            mid = (c2 * f_l - c1 * f_r) / (c2 - c1) + c1 * c2 / (c2 - c1) * (u_r - u_l)
            out.append(_out(np.where(c1 >= 0, f_l, np.where(c2 <= 0, f_r, mid))))
    return FluxVector(*out)


def rusanov_flux(ul: ConservedState, ur: ConservedState, k_star, rho) -> FluxVector:
    """Local Lax-Friedrichs flux; used as an independent cross-check of HLL."""
    fl = physical_flux(ul, k_star, rho)
    fr = physical_flux(ur, k_star, rho)
    vl, vr, cl, cr = _speed_bounds(ul, ur, k_star, rho)
    s = np.maximum(np.abs(vl) + cl, np.abs(vr) + cr)
    return FluxVector(
        *(_out(0.5 * (f_l + f_r) - 0.5 * s * (u_r - u_l)) for f_l, f_r, u_l, u_r in zip(fl, fr, ul, ur))
    )


NUMERICAL_FLUXES = {"hll": hll_flux, "rusanov": rusanov_flux}


def max_wave_speed(state: ConservedState, k, rho) -> float:
    """``max_i(|u_i| + c_i)``, dry cells contributing zero."""
    u = _wet_velocity(state.a, state.q)
    c = sound_speed(state.a, k, rho)
    return float(np.max(np.abs(u) + c))


def cfl_timestep(state, geom: VesselGeometry, rho, dx, n_cfl=1.0) -> float:
    """Largest step allowed by ``dt <= n_cfl dx / max_i(|u_i| + c_i)``."""
    if not 0 < n_cfl <= 1:
        raise ValueError(f"n_cfl must lie in (0, 1], got {n_cfl!r}")
    cells = state.cells if isinstance(state, SimulationState) else state
    smax = max_wave_speed(cells, geom.k, rho)
    if not smax > 0:
        raise AllDryError("all cells dry, CFL time step undefined",
                          getattr(state, "time", None))
    return n_cfl * dx / smax
