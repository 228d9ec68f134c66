import math

import numpy as np
import pytest

from arteryflow._backend import BACKENDS

A0_PAPER = math.pi * (4.0e-3) ** 2
RHO = 1060.0


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
