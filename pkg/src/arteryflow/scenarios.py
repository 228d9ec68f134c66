"""Geometry/initial-condition profiles and the three verification presets."""
from __future__ import annotations

import math

import numpy as np

from .core import area

# --- stiffness profiles -------------------------------------------------------


def stent_stiffness(x, k0, dk, x1, x2, x3, x4):
    """Plateau ``k0 + dk`` on ``[x2, x3]`` joined to ``k0`` by sine/cosine ramps."""
    x = np.asarray(x, dtype=float)
    rise = k0 + 0.5 * dk * (np.sin((x - x1) / (x2 - x1) * math.pi - math.pi / 2) + 1.0)
    fall = k0 + 0.5 * dk * (np.cos((x - x3) / (x4 - x3) * math.pi) + 1.0)
    return np.select(
        [(x <= x1) | (x >= x4), x < x2, x <= x3],
        [k0, rise, k0 + dk],
        default=fall,
    )


def step_down_stiffness(x, k_right, dk, x1, x2):
    """``k_right + dk`` up to ``x1``, cosine ramp on ``(x1, x2]``, ``k_right`` beyond."""
    x = np.asarray(x, dtype=float)
    ramp = k_right + 0.5 * dk * (1.0 + np.cos((x - x1) / (x2 - x1) * math.pi))
    return np.select([x <= x1, x <= x2], [k_right + dk, ramp], default=k_right)


def radius_bump(x, r0, eps, x_start, x_end):
    """``r0 (1 + eps sin(pi (x - x_start) / (x_end - x_start)))`` on the bump, ``r0`` elsewhere."""
    x = np.asarray(x, dtype=float)
    r0 = np.broadcast_to(np.asarray(r0, dtype=float), x.shape)
    inside = (x >= x_start) & (x <= x_end)
    bump = r0 * (1.0 + eps * np.sin(math.pi * (x - x_start) / (x_end - x_start)))
    return np.where(inside, bump, r0)


# --- registries used by the config layer ------------------------------------
# Each entry maps parameter name -> (type, default); default None means required.

GEOMETRY_PROFILES = {
    "uniform": {"k": (float, None), "r0": (float, None)},
    "stent": {"k0": (float, None), "dk": (float, None), "x1": (float, None),
              "x2": (float, None), "x3": (float, None), "x4": (float, None),
              "r0": (float, None)},
    "step_down": {"k_right": (float, None), "dk": (float, None), "x1": (float, None),
                  "x2": (float, None), "r0": (float, None)},
    "table": {"path": (str, None)},
}

INITIAL_PROFILES = {
    "dead_man": {"cst": (float, 0.0)},
    "radius_bump": {"eps": (float, None), "x_start": (float, None), "x_end": (float, None)},
}

WAVEFORM_PARAMS = {
    "sine": {"q_amp": (float, None), "omega": (float, None)},
    "constant": {"q": (float, None)},
}


def load_geometry_table(path):
    """Read ``x,k,A0`` samples (CSV with header) for linear interpolation."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    names = {n.lower(): n for n in data.dtype.names}
    try:
        return data[names["x"]], data[names["k"]], data[names["a0"]]
    except KeyError:
        raise ValueError(f"{path}: geometry table needs columns x,k,A0") from None


def geometry_profiles(name: str, params: dict):
    """``(k(x), a0(x))`` callables for a named profile."""
    if name == "uniform":
        a0 = area(params["r0"])
        return (lambda x: np.full_like(x, params["k"]), lambda x: np.full_like(x, a0))
    if name == "stent":
        a0 = area(params["r0"])
        keys = ("k0", "dk", "x1", "x2", "x3", "x4")
        return (lambda x: stent_stiffness(x, *(params[k] for k in keys)),
                lambda x: np.full_like(x, a0))
    if name == "step_down":
        a0 = area(params["r0"])
        keys = ("k_right", "dk", "x1", "x2")
        return (lambda x: step_down_stiffness(x, *(params[k] for k in keys)),
                lambda x: np.full_like(x, a0))
    if name == "table":
        xs, ks, a0s = load_geometry_table(params["path"])
        return (lambda x: np.interp(x, xs, ks), lambda x: np.interp(x, xs, a0s))
    raise ValueError(f"unknown geometry profile {name!r}")


# --- presets ----------------------------------------------------------------

PRESETS = ("dead_man", "stented_reflection", "damped_wave")

R0 = 4.0e-3
RHO = 1060.0


def _base(name, j_cells, length, t_end, snapshots):
    return {
        "scenario": name,
        "grid.j_cells": j_cells,
        "grid.length": length,
        "physics.rho": RHO,
        "physics.cf": 0.0,
        "physics.p0": 0.0,
        "boundary.left.kind": "transmissive",
        "boundary.right.kind": "transmissive",
        "run.t_end": t_end,
        "run.n_cfl": 1.0,
        "run.flux": "hll",
        "run.snapshots": tuple(snapshots),
    }


def preset_values(name: str) -> dict:
    """Flat configuration values of a named preset."""
    if name == "dead_man":
        flat = _base(name, 50, 0.14, 5.0, [0.5 * i for i in range(11)])
        flat.update({
            "geometry.profile": "stent",
            "geometry.k0": 1.0e8, "geometry.dk": 6.0e7,
            "geometry.x1": 1.0e-2, "geometry.x2": 3.05e-2,
            "geometry.x3": 4.95e-2, "geometry.x4": 7.0e-2,
            "geometry.r0": R0,
            "initial.profile": "dead_man", "initial.cst": 0.0,
        })
        return flat
    if name == "stented_reflection":
        length = 0.16
        flat = _base(name, 1500, length, 8.0e-3, [1.5e-3, 5.0e-3])
        flat.update({
            "geometry.profile": "step_down",
            "geometry.k_right": 1.0e8, "geometry.dk": 6.0e7,
            "geometry.x1": 19 * length / 40, "geometry.x2": length / 2,
            "geometry.r0": R0,
            "initial.profile": "radius_bump", "initial.eps": 1.0e-2,
            "initial.x_start": 65 * length / 100, "initial.x_end": 85 * length / 100,
        })
        return flat
    if name == "damped_wave":
        flat = _base(name, 750, 3.0, 5.0, [])
        flat.update({
            "geometry.profile": "uniform", "geometry.k": 1.0e8, "geometry.r0": R0,
            "initial.profile": "dead_man", "initial.cst": 0.0,
            "boundary.left.kind": "imposed_discharge",
            "boundary.left.waveform": "sine",
            "boundary.left.q_amp": 3.45e-7,
            "boundary.left.omega": 2 * math.pi / 0.5,
        })
        return flat
    raise ValueError(f"unknown scenario {name!r}; expected one of {PRESETS}")


def preset(name: str, overrides: dict | None = None):
    """Expand a preset (with optional flat-key overrides) to a SimulationConfig."""
    from .config import SimulationConfig, resolve_keys

    flat = preset_values(name)
    return SimulationConfig.from_flat({**flat, **resolve_keys(overrides or {}, flat)})


def build_dead_man(**overrides):
    return preset("dead_man", overrides)


def build_stented_reflection(**overrides):
    return preset("stented_reflection", overrides)


def build_damped_wave(cf: float = 0.0, **overrides):
    return preset("damped_wave", {"physics.cf": cf, **overrides})
