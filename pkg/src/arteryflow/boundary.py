"""Ghost-cell closures for the two ends of the vessel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import ConservedState, VesselGeometry

KINDS = ("imposed_discharge", "transmissive", "wall")
SIDES = ("left", "right")


@dataclass(frozen=True)
class SineWaveform:
    """``amplitude * sin(omega * t)``."""

    amplitude: float
    omega: float

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega * t)


@dataclass(frozen=True)
class ConstantWaveform:
    value: float

    def __call__(self, t: float) -> float:
        return self.value


WAVEFORMS = {
    "sine": (SineWaveform, ("q_amp", "omega")),
    "constant": (ConstantWaveform, ("q",)),
}


def make_waveform(name: str, params: dict) -> Callable[[float], float]:
    try:
        cls, keys = WAVEFORMS[name]
    except KeyError:
        raise ValueError(f"unknown waveform {name!r}; expected one of {sorted(WAVEFORMS)}") from None
    missing = [key for key in keys if key not in params]
    if missing:
        raise ValueError(f"waveform {name!r} needs {missing}")
    return cls(*(float(params[key]) for key in keys))


@dataclass(frozen=True)
class BoundaryDriver:
    """Closure for one end of the domain.

    ``imposed_discharge`` copies the area from the interior and imposes
    ``waveform(t)`` as ghost discharge; ``transmissive`` copies the interior
    cell; ``wall`` copies the area and negates the discharge.
    """

    kind: str
    side: str
    waveform: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}; expected one of {KINDS}")
        if self.side not in SIDES:
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if self.kind == "imposed_discharge" and self.waveform is None:
            raise ValueError("imposed_discharge needs a waveform")

    def ghost(self, a_adj: float, q_adj: float, t: float) -> tuple[float, float]:
        """Ghost ``(a, q)`` from the adjacent interior cell at time ``t``."""
        if self.kind == "transmissive":
            return a_adj, q_adj
        if self.kind == "wall":
            return a_adj, -q_adj
        return a_adj, float(self.waveform(t))


def ghost_states(state: ConservedState, geometry: VesselGeometry, driver: BoundaryDriver, t: float):
    """Ghost cell for ``driver.side``: ``(ConservedState, k, calA0)``.

    Ghost geometry is that of the adjacent cell so the reconstruction never
    sees a jump of ``calA0`` across a boundary.
    """
    a = np.asarray(state.a, dtype=float)
    q = np.asarray(state.q, dtype=float)
    if a.size < 1:
        raise ValueError("state has no cells")
    i = 0 if driver.side == "left" else -1
    ga, gq = driver.ghost(float(a[i]), float(q[i]), t)
    return ConservedState(ga, gq), float(geometry.k[i]), float(geometry.calA0[i])
