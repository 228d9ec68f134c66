"""The compiled kernel and the numpy path must agree bit for bit."""
import numpy as np
import pytest

from arteryflow import _kernels_py
from arteryflow._backend import BACKENDS, get_backend
from arteryflow.core import VesselGeometry
from arteryflow.integrator import run
from arteryflow.scenarios import build_damped_wave, build_stented_reflection

from conftest import A0_PAPER, RHO

compiled = pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")


def test_python_backend_always_available():
    assert get_backend("python") is _kernels_py
    with pytest.raises(ValueError):
        get_backend("fortran")


def _random_extended(rng, n, dry=False):
    k = rng.uniform(5e7, 4e8, n)
    a0 = A0_PAPER * rng.uniform(0.3, 3.0, n)
    geom = VesselGeometry(k, a0)
    a = a0 * rng.uniform(0.5, 1.5, n)
    q = a * rng.uniform(-20, 20, n)
    if dry:
        a[::7] = 0.0
        q[::7] = 0.0
    return a, q, geom.k.copy(), geom.calA0.copy()


@compiled
@pytest.mark.parametrize("kind", [0, 1])
@pytest.mark.parametrize("dry", [False, True])
def test_convective_update_bitwise(rng, kind, dry):
    ext = get_backend("compiled")
    for n in (3, 17, 400):
        a, q, k, cal = _random_extended(rng, n, dry)
        outs = []
        for mod in (ext, _kernels_py):
            a_out, q_out = np.empty(n - 2), np.empty(n - 2)
            clamps = mod.convective_update(a, q, k, cal, RHO, 3e-3, kind, a_out, q_out)
            outs.append((a_out, q_out, clamps))
        np.testing.assert_array_equal(outs[0][0], outs[1][0])
        np.testing.assert_array_equal(outs[0][1], outs[1][1])
        assert outs[0][2] == outs[1][2]
        assert ext.max_wave_speed(a, q, k, RHO) == _kernels_py.max_wave_speed(a, q, k, RHO)


@compiled
def test_clamp_counts_agree(rng):
    ext = get_backend("compiled")
    n = 50
    k = np.full(n, 1e8)
    cal = rng.uniform(0.0, 2e6, n)  # wild calA0 jumps force clamping
    a = np.full(n, 1e-5)
    q = np.zeros(n)
    counts = []
    for mod in (ext, _kernels_py):
        a_out, q_out = np.empty(n - 2), np.empty(n - 2)
        counts.append(mod.convective_update(a, q, k, cal, RHO, 1e-3, 0, a_out, q_out))
    assert counts[0] == counts[1] > 0


@compiled
@pytest.mark.parametrize("config", [
    build_stented_reflection(**{"run.t_end": 2e-3, "run.snapshots": ()}),
    build_damped_wave(cf=0.005053, **{"run.t_end": 0.2}),
    build_damped_wave(cf=0.0, **{"run.t_end": 0.2, "run.flux": "rusanov"}),
], ids=["stented", "damped-viscous", "damped-rusanov"])
def test_runs_identical(config):
    fast = run(config, backend="compiled")
    slow = run(config, backend="python")
    assert fast.steps == slow.steps
    for s1, s2 in zip(fast, slow):
        np.testing.assert_array_equal(s1.a, s2.a)
        np.testing.assert_array_equal(s1.q, s2.q)
