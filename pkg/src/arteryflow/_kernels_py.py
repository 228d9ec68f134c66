"""Pure-numpy implementation of the kernel surface in ``_kernels.pyx``."""
import numpy as np

from .core import ConservedState
from .flux import NUMERICAL_FLUXES, max_wave_speed as _max_wave_speed
from .wellbalanced import convective_update as _convective_update

FLUX_KINDS = {"hll": 0, "rusanov": 1}
_BY_KIND = {v: NUMERICAL_FLUXES[name] for name, v in FLUX_KINDS.items()}


def convective_update(a, q, k, cal, rho, dt_dx, kind, a_out, q_out):
    new, clamps = _convective_update(ConservedState(a, q), k, cal, rho, dt_dx, _BY_KIND[kind])
    a_out[:] = new.a
    q_out[:] = new.q
    return clamps


def max_wave_speed(a, q, k, rho):
    return _max_wave_speed(ConservedState(a, q), k, rho)
