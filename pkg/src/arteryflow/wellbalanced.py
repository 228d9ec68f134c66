"""Hydrostatic-type reconstruction and source-corrected interface fluxes.

Interface ``j`` separates cells ``j`` and ``j + 1`` of an *extended* cell
array, i.e. one that already carries a ghost cell at each end. For ``J``
interior cells there are ``J + 2`` extended cells and ``J + 1`` interfaces.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import ConservedState
from .flux import FluxVector, hll_flux, pressure_flux


class InterfaceReconstruction(NamedTuple):
    a_left: np.ndarray
    a_right: np.ndarray
    q_left: np.ndarray
    q_right: np.ndarray
    k_star: np.ndarray
    delta_calA0: np.ndarray
    clamped_left: np.ndarray
    clamped_right: np.ndarray

    @property
    def left(self) -> ConservedState:
        return ConservedState(self.a_left, self.q_left)

    @property
    def right(self) -> ConservedState:
        return ConservedState(self.a_right, self.q_right)

    @property
    def clamp_count(self) -> int:
        return int(np.count_nonzero(self.clamped_left) + np.count_nonzero(self.clamped_right))


class InterfaceFluxes(NamedTuple):
    """``left[j]`` is the flux seen by cell ``j``, ``right[j]`` by cell ``j + 1``.

    Mass components are shared; only momentum carries the source correction.
    """

    left: FluxVector
    right: FluxVector
    reconstruction: InterfaceReconstruction


def p_term(a, k, rho):
    """``k a^{3/2} / (3 rho sqrt(pi))``, the pressure part of the momentum flux."""
    return pressure_flux(a, k, rho)


def _velocity(a, q):
    return np.divide(q, a, out=np.zeros(np.shape(a)), where=a > 0)


def reconstruct_interface(cell_i: ConservedState, cell_ip1: ConservedState,
                          k_i, k_ip1, calA0_i, calA0_ip1) -> InterfaceReconstruction:
    """Reconstruct the two states seen by an interface.

    The square roots of the areas are rebuilt from ``k sqrt(A)`` against the
    jump of ``calA0`` and clamped at zero; velocities are copied from the
    parent cells. Where the formula reduces to the identity (no jump on that
    side and ``k`` already equals ``k_star``) the parent state is returned
    unchanged so flat geometry is reproduced bit for bit.
    """
    a_i = np.atleast_1d(np.asarray(cell_i.a, dtype=float))
    a_j = np.atleast_1d(np.asarray(cell_ip1.a, dtype=float))
    q_i = np.atleast_1d(np.asarray(cell_i.q, dtype=float))
    q_j = np.atleast_1d(np.asarray(cell_ip1.q, dtype=float))
    k_i, k_ip1, calA0_i, calA0_ip1 = np.broadcast_arrays(
        *(np.atleast_1d(np.asarray(v, dtype=float)) for v in (k_i, k_ip1, calA0_i, calA0_ip1))
    )

    k_star = np.maximum(k_i, k_ip1)
    delta = calA0_ip1 - calA0_i
    d_neg = np.minimum(delta, 0.0)
    d_pos = np.maximum(delta, 0.0)

    s_left = k_i * np.sqrt(a_i) + d_neg
    s_right = k_ip1 * np.sqrt(a_j) - d_pos
    clamped_left = s_left < 0
    clamped_right = s_right < 0
    r_left = np.maximum(s_left, 0.0) / k_star
    r_right = np.maximum(s_right, 0.0) / k_star
    a_left = r_left * r_left
    a_right = r_right * r_right
    q_left = a_left * _velocity(a_i, q_i)
    q_right = a_right * _velocity(a_j, q_j)

    same_left = (d_neg == 0) & (k_i == k_star)
    same_right = (d_pos == 0) & (k_ip1 == k_star)
    a_left = np.where(same_left, a_i, a_left)
    q_left = np.where(same_left, q_i, q_left)
    a_right = np.where(same_right, a_j, a_right)
    q_right = np.where(same_right, q_j, q_right)

    return InterfaceReconstruction(a_left, a_right, q_left, q_right, k_star, delta,
                                   clamped_left, clamped_right)


def interface_fluxes(cells: ConservedState, k, calA0, rho, numerical_flux=hll_flux) -> InterfaceFluxes:
    """Source-corrected fluxes on every interface of an extended cell array."""
    a = np.asarray(cells.a, dtype=float)
    q = np.asarray(cells.q, dtype=float)
    k = np.asarray(k, dtype=float)
    calA0 = np.asarray(calA0, dtype=float)
    rec = reconstruct_interface(ConservedState(a[:-1], q[:-1]), ConservedState(a[1:], q[1:]),
                                k[:-1], k[1:], calA0[:-1], calA0[1:])
    f = numerical_flux(rec.left, rec.right, rec.k_star, rho)
    mom_left = f.f_momentum + (p_term(a[:-1], k[:-1], rho) - p_term(rec.a_left, rec.k_star, rho))
    mom_right = f.f_momentum + (p_term(a[1:], k[1:], rho) - p_term(rec.a_right, rec.k_star, rho))
    return InterfaceFluxes(FluxVector(f.f_mass, mom_left), FluxVector(f.f_mass, mom_right), rec)


def convective_update(cells: ConservedState, k, calA0, rho, dt_over_dx, numerical_flux=hll_flux):
    """One explicit convective step on the interior of an extended array.

    Returns ``(interior state after the step, clamp count)``.
    """
    fl = interface_fluxes(cells, k, calA0, rho, numerical_flux)
    a = np.asarray(cells.a, dtype=float)
    q = np.asarray(cells.q, dtype=float)
    a_new = a[1:-1] - dt_over_dx * (fl.left.f_mass[1:] - fl.right.f_mass[:-1])
    q_new = q[1:-1] - dt_over_dx * (fl.left.f_momentum[1:] - fl.right.f_momentum[:-1])
    return ConservedState(a_new, q_new), fl.reconstruction.clamp_count
