import numpy as np
import pytest

from rvfl_gmra.domain import CompactDomain, EmbeddedSphere


@pytest.fixture(scope="session")
def unit_interval():
    return CompactDomain.box([[0.0, 1.0]])


@pytest.fixture(scope="session")
def sym_interval():
    return CompactDomain.box([[-1.0, 1.0]])


@pytest.fixture(scope="session")
def sphere():
    return EmbeddedSphere()


@pytest.fixture(scope="session")
def sphere_cloud(sphere):
    return sphere.sample(5000, 0)


@pytest.fixture(scope="session")
def plane_cloud():
    """Points on a random 2-plane through a random offset in R^6."""
    rng = np.random.default_rng(11)
    Q, _ = np.linalg.qr(rng.standard_normal((6, 2)))
    c = rng.standard_normal(6)
    z = rng.uniform(-1, 1, size=(600, 2))
    return c + z @ Q.T
