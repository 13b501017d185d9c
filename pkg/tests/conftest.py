import numpy as np
import pytest

from staticlab.geometry import (
    RadialBase,
    StaticModel,
    constant_warp,
    euclidean_profile,
    hyperbolic_profile,
    schwarzschild_profile,
    schwarzschild_warp,
)


@pytest.fixture(scope="session")
def hyperbolic_model():
    base = RadialBase(2, hyperbolic_profile(1.0), (0.0, 25.0))
    return StaticModel(base, constant_warp(1.0))


@pytest.fixture(scope="session")
def euclid_model():
    base = RadialBase(2, euclidean_profile(), (0.0, 25.0))
    return StaticModel(base, constant_warp(1.0))


@pytest.fixture(scope="session")
def euclid_annulus():
    base = RadialBase(2, euclidean_profile(), (0.5, 10.0))
    return StaticModel(base, constant_warp(1.0))


@pytest.fixture(scope="session")
def schwarzschild_model():
    base = RadialBase(3, schwarzschild_profile(1.0, 3), (0.2, 80.0))
    return StaticModel(base, schwarzschild_warp(1.0, 3))
