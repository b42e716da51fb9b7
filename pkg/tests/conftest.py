import numpy as np
import pytest

from relcomm.constructions import TruncatedRingSpec, build_group, build_ring


@pytest.fixture(scope="session")
def s3():
    return build_group("symmetric:3")


@pytest.fixture(scope="session")
def c2():
    return build_group("cyclic:2")


@pytest.fixture(scope="session")
def c4():
    return build_group("cyclic:4")


@pytest.fixture(scope="session")
def c6():
    return build_group("cyclic:6")


@pytest.fixture(scope="session")
def d4():
    return build_group("dihedral:4")


@pytest.fixture(scope="session")
def q8():
    return build_group("quaternion")


@pytest.fixture(scope="session")
def ring_a4():
    """Z/2[a] with a^4 = 0 (8 elements, dimension 3)."""
    return build_ring(TruncatedRingSpec(p=2, generators=("a",),
                                        nil_squares=False, max_degree=3))


@pytest.fixture(scope="session")
def z5_model():
    """Z/5[a1,a2,b], squarefree, degree <= 3 (dimension 7)."""
    return build_ring(TruncatedRingSpec(p=5, generators=("a1", "a2", "b"),
                                        nil_squares=True, max_degree=3))
