"""Reference solutions: rest equilibria, interface coefficients, damped waves."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import ConservedState, SimulationState, SnapshotSeries, VesselGeometry, radius
from .errors import NonPhysicalError, WindowError


def dead_man_state(geometry: VesselGeometry, constant: float = 0.0) -> SimulationState:
    """Rest state with ``k sqrt(A) - calA0 = constant`` in every cell.

    ``constant == 0`` returns ``A = A0`` exactly (a copy, not a recomputation).
    """
    if constant == 0:
        a = np.array(geometry.a0)
    else:
        root = (geometry.calA0 + constant) / geometry.k
        if np.any(root <= 0):
            raise NonPhysicalError("equilibrium constant gives a non-positive area")
        a = root * root
    return SimulationState(0.0, ConservedState(a, np.zeros_like(a)))


def equilibrium_residual(state: SimulationState, geometry: VesselGeometry, constant=0.0):
    """Per-cell ``k sqrt(A) - calA0 - constant``."""
    return geometry.k * np.sqrt(state.a) - geometry.calA0 - constant


@dataclass(frozen=True)
class InterfaceCoefficients:
    """Linear pressure-amplitude ratios for a wave crossing a stiffness jump.

    The wave travels from the medium with speed ``c_right`` into the one
    with ``c_left``. The reflected wave stays in its medium, so its radius
    ratio equals ``reflection``; the transmitted radius ratio differs by
    the stiffness ratio, see :attr:`radius_transmission`.
    """

    reflection: float
    transmission: float
    c_left: float
    c_right: float

    @property
    def radius_transmission(self) -> float:
        """Transmitted/incident radius ratio for equal rest sections (``k ~ c^2``)."""
        return self.transmission * (self.c_right / self.c_left) ** 2


def interface_coefficients(c_left: float, c_right: float) -> InterfaceCoefficients:
    """Reflection/transmission from continuity of pressure and discharge.

    The linear impedance ``p / Q`` of a simple wave is ``rho c / A0``, so for
    equal rest sections both coefficients only involve the speed ratio.
    """
    if not (c_left > 0 and c_right > 0):
        raise ValueError("wave speeds must be > 0")
    total = c_left + c_right
    reflection = (c_left - c_right) / total
    return InterfaceCoefficients(reflection, 1.0 + reflection, c_left, c_right)


@dataclass(frozen=True)
class DampedWaveParams:
    omega: float
    k_r: float
    k_i: float
    q_amp: float
    c0: float

    @property
    def wave_vector(self) -> complex:
        return complex(self.k_r, self.k_i)


def damped_wave_params(omega: float, c0: float, cf: float, a0: float,
                       q_amp: float = 1.0) -> DampedWaveParams:
    """Wave vector of ``exp(i(omega t - K x))`` for the linearized system.

    Linearizing about ``(A0, 0)`` with uniform stiffness gives
    ``K^2 c0^2 = omega^2 - i omega cf / A0``; the branch with ``k_r > 0``
    (and so ``k_i <= 0``) is the outgoing, decaying one.
    """
    if not (omega > 0 and c0 > 0 and cf >= 0 and a0 > 0):
        raise ValueError("need omega > 0, c0 > 0, cf >= 0, a0 > 0")
    if cf == 0:
        return DampedWaveParams(omega, omega / c0, 0.0, q_amp, c0)
    K = cmath.sqrt(complex(omega * omega, -omega * cf / a0)) / c0
    if K.real < 0:
        K = -K
    return DampedWaveParams(omega, K.real, K.imag, q_amp, c0)


def damped_wave_discharge(params: DampedWaveParams, x, t):
    """``Q_amp sin(omega t - k_r x) exp(k_i x)`` behind the front ``k_r x = omega t``, zero ahead."""
    x = np.asarray(x, dtype=float)
    phase = params.omega * t - params.k_r * x
    q = np.where(phase >= 0, params.q_amp * np.sin(phase) * np.exp(params.k_i * x), 0.0)
    return q if q.ndim else float(q)


@dataclass(frozen=True)
class PulseAmplitudes:
    """Peak radius and pressure perturbations around an interface.

    ``*_radius`` are ``max|R - R0|``; ``*_pressure`` are ``max|p - p0|``.
    """

    incident_radius: float
    reflected_radius: float
    transmitted_radius: float
    incident_pressure: float
    reflected_pressure: float
    transmitted_pressure: float

    @property
    def incident(self):
        return self.incident_radius

    @property
    def reflected(self):
        return self.reflected_radius

    @property
    def transmitted(self):
        return self.transmitted_radius

    def radius_ratios(self) -> tuple[float, float]:
        """``(reflected, transmitted) / incident`` for radius perturbations."""
        return (self.reflected_radius / self.incident_radius,
                self.transmitted_radius / self.incident_radius)

    def pressure_ratios(self) -> tuple[float, float]:
        """``(reflected, transmitted) / incident`` for pressure perturbations."""
        return (self.reflected_pressure / self.incident_pressure,
                self.transmitted_pressure / self.incident_pressure)


def _snapshot_at(series: SnapshotSeries, t: float, tol: float):
    snap = series.at(t)
    if abs(snap.t - t) > tol:
        raise WindowError(f"no snapshot at t = {t:g} s (closest {snap.t:g} s)")
    return snap


def measure_pulse_amplitudes(series: SnapshotSeries, interface_x, window, *,
                             quiet_fraction=0.02) -> PulseAmplitudes:
    """Incident/reflected/transmitted peaks from two snapshots.

    ``interface_x`` is a point or an ``(x_start, x_end)`` band covering the
    stiffness transition; ``window = (t_before, t_after)`` names the snapshot
    before any interaction and one after the pulses have fully separated
    from the band. Raises :class:`WindowError` if either snapshot still has
    a perturbation larger than ``quiet_fraction`` of the incident peak
    where it should be quiet.
    """
    band = np.atleast_1d(np.asarray(interface_x, dtype=float))
    x_lo, x_hi = float(band.min()), float(band.max())
    t_before, t_after = window
    if not t_after > t_before:
        raise WindowError("window must satisfy t_before < t_after")
    tol = 1e-12 * max(1.0, abs(t_after))
    before = _snapshot_at(series, t_before, tol)
    after = _snapshot_at(series, t_after, tol)
    x = before.x
    r0 = radius(series.geometry.a0)
    p0 = series.params.p0
    left = x < x_lo
    right = x > x_hi
    inside = ~(left | right)

    def peaks(snap, mask):
        dr = np.abs(radius(snap.a) - r0)[mask]
        dp = np.abs(snap.p - p0)[mask]
        return (float(dr.max()) if dr.size else 0.0, float(dp.max()) if dp.size else 0.0)

    inc_r, inc_p = peaks(before, right)
    if inc_r == 0:
        raise WindowError("no incident pulse right of the interface")
    if max(peaks(before, left)[0], peaks(before, inside)[0]) > quiet_fraction * inc_r:
        raise WindowError("pulse already reached the interface at t_before")
    if peaks(after, inside)[0] > quiet_fraction * inc_r:
        raise WindowError("pulse still overlaps the interface at t_after")
    ref_r, ref_p = peaks(after, right)
    tr_r, tr_p = peaks(after, left)
    return PulseAmplitudes(inc_r, ref_r, tr_r, inc_p, ref_p, tr_p)


def envelope_decay_rate(x, envelope) -> float:
    """Least-squares slope of ``log(envelope)`` against ``x``."""
    slope, _ = np.polyfit(np.asarray(x, dtype=float), np.log(np.asarray(envelope, dtype=float)), 1)
    return float(slope)
