import numpy as np
import pytest

from scbound.dists import Alphabet, Channel, JointDist, join

BIT = (0, 1)


@pytest.fixture
def bit_axes():
    return Alphabet("X", BIT), Alphabet("Y", BIT), Alphabet("Z", BIT)


@pytest.fixture
def and_channel(bit_axes):
    x, y, z = bit_axes
    return Channel.from_function(x, y, z, lambda a, b: a & b)


@pytest.fixture
def uniform_bits(bit_axes):
    x, y, _ = bit_axes
    return JointDist.uniform((x, y))


@pytest.fixture
def and_joint(uniform_bits, and_channel):
    return join(uniform_bits, and_channel)


def random_joint(rng, shape, max_weight=8):
    """Integer-weight random pmf: exact, and support control is easy."""
    w = rng.integers(0, max_weight, size=shape).astype(float)
    if w.sum() == 0:
        w.flat[0] = 1.0
    return w / w.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
