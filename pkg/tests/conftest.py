import numpy as np
import pytest

from qdcavity.experiments import default_grid
from qdcavity.hilbert import build_operators
from qdcavity.params import PulseSpec, reference_params


@pytest.fixture(scope="session")
def ops20():
    return build_operators(20)


@pytest.fixture(scope="session")
def ref():
    return reference_params()


@pytest.fixture(scope="session")
def weak_pulse():
    return PulseSpec.from_ghz(omega0=1.0, fwhm=5.0)


@pytest.fixture(scope="session")
def ref_grid(ref, weak_pulse):
    return default_grid(ref, weak_pulse)


@pytest.fixture(scope="session")
def ref_quantum(ops20, ref, weak_pulse, ref_grid):
    from qdcavity.quantum import evolve_master
    return evolve_master(ops20, ref, weak_pulse, ref_grid)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density_matrix(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho)
