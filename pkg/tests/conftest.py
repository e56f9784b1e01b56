"""Test configuration and fixtures."""

import pytest

from lentparticle.bottom import functions
from lentparticle.bottom.measure import stable_like_measure, uniform_measure
from lentparticle.core.streams import PathStreams
from lentparticle.poisson.path import Configuration


@pytest.fixture(scope="session")
def stable():
    """Symmetric stable-like measure on [−1, −0.1] ∪ [0.1, 1], λ = 5, m1 = 0."""
    return stable_like_measure()


@pytest.fixture(scope="session")
def uniform():
    """Uniform measure on [0.1, 1], λ = 5, m1 > 0."""
    return uniform_measure()


@pytest.fixture
def cfg1(stable):
    """Canonical configuration: T = 1, atoms (0.3, +0.5) and (0.7, −0.3)."""
    return Configuration.from_arrays(stable, 1.0, [0.3, 0.7], [0.5, -0.3])


@pytest.fixture
def empty(stable):
    """Empty configuration on [0, 1]."""
    return Configuration.from_arrays(stable, 1.0, [], [])


@pytest.fixture
def streams():
    """Per-path streams under seed 42."""
    return PathStreams.named(42, "tests")


@pytest.fixture
def identity():
    return functions.identity()


@pytest.fixture
def square():
    return functions.polynomial([0.0, 0.0, 1.0], name="square")


@pytest.fixture
def sigmoid():
    return functions.sigmoid(scale=3.0, amplitude=2.0, offset=-1.0)


@pytest.fixture
def interior_bump():
    """Bump compactly supported inside [0.1, 1]."""
    return functions.bump(center=0.5, width=0.3, amplitude=1.0)
