import math
from pathlib import Path

import numpy as np
import pytest

from conebilliard.geometry import builtin_shapes, circular_cone

CONES = Path(__file__).resolve().parent.parent / "cones"
S2 = 1.0 / math.sqrt(2.0)


@pytest.fixture(scope="session")
def shapes():
    return builtin_shapes()


@pytest.fixture(scope="session")
def circ():
    return circular_cone()


@pytest.fixture(params=["circular", "ellipse", "fourier3", "ellipsoid4"])
def shape(request, shapes):
    return shapes[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def cones_dir():
    return CONES
