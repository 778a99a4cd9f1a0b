import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(p):
    """Dense matrix of a PauliString; qubit 0 is the leftmost tensor factor."""
    m = np.array([[1]], dtype=complex)
    for q in range(p.n):
        m = np.kron(m, PAULI_MATRICES[p.op(q)])
    return p.sign * m


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
