import os

import numpy as np
import pytest

from anyonbraid.errors import CapExceededError, StabilizerError
from anyonbraid.lattice import six_qubit_code
from anyonbraid.protocols import ground_state_circuit, ramsey_circuit
from anyonbraid.stabilizer import Circuit, PauliString
from anyonbraid.stabilizer.circuit import Gate
from anyonbraid.statevector import (
    StateVector, cross_check, default_cap, dump_state, load_state, sv_apply, sv_expectation, sv_overlap,
)
from helpers import random_pauli, random_unitary_circuit

H = 1 / np.sqrt(2)


def test_hadamard_and_s_squared():
    s = sv_apply(StateVector(1), Gate("H", (0,)))
    assert np.allclose(s.amplitudes, [H, H])
    s.s(0).s(0)
    assert np.allclose(s.amplitudes, [H, -H])


def test_qubit_one_is_most_significant():
    s = StateVector(3).x(0)
    assert s.amplitudes[0b100] == 1


def test_expectations():
    z = PauliString.single(1, 0, "Z")
    assert sv_expectation(StateVector(1), z) == 1.0
    assert abs(sv_expectation(StateVector(1).h(0), z)) < 1e-15
    phi = StateVector(6)
    phi.apply_circuit(ground_state_circuit(six_qubit_code()))
    for g in six_qubit_code().generators():
        assert abs(phi.expectation(g) - 1) < 1e-10


def test_overlaps():
    phi = StateVector(6)
    phi.apply_circuit(ground_state_circuit(six_qubit_code()))
    assert abs(sv_overlap(phi, phi) - 1) < 1e-12
    assert abs(sv_overlap(phi, phi.copy().z(2))) < 1e-12
    with pytest.raises(StabilizerError):
        sv_overlap(StateVector(1), StateVector(2))


def test_norm_preserved_over_long_circuit(rng):
    s = StateVector(8)
    s.apply_circuit(random_unitary_circuit(8, 10_000, rng))
    assert abs(s.norm() - 1) < 1e-10


def test_cap(monkeypatch):
    assert default_cap() == 20
    with pytest.raises(CapExceededError):
        StateVector(25)
    with pytest.raises(CapExceededError):
        cross_check(Circuit(25), [0])
    monkeypatch.setenv("ANYONBRAID_SV_CAP", "4")
    with pytest.raises(CapExceededError):
        StateVector(5)


def test_dump_roundtrip():
    s = StateVector(3).h(0).cnot(0, 1).s(2)
    data = dump_state(s)
    assert data[:8] == (3).to_bytes(8, "little")
    assert len(data) == 8 + 16 * 8
    assert np.array_equal(load_state(data).amplitudes, s.amplitudes)


def test_project_out():
    s = StateVector(2).h(0).cnot(0, 1)
    s.measure_pauli(PauliString.single(2, 1, "Z"), outcome=-1)
    reduced = s.project_out(1, "Z", -1)
    assert reduced.n == 1 and np.allclose(np.abs(reduced.amplitudes), [0, 1])
    with pytest.raises(StabilizerError):
        StateVector(2).h(0).cnot(0, 1).project_out(0, "Z", 1)


def test_cross_check_six_qubit_ramsey():
    rep = cross_check(ramsey_circuit(six_qubit_code(), 3, 4, (6, 5, 3, 4)), range(4))
    assert rep.passed, rep.failures
    assert rep.measurements == 4 * 6


def test_cross_check_random_circuits_up_to_12_qubits(rng):
    randoms = 0
    for i in range(40):
        n = int(rng.integers(1, 13))
        c = random_unitary_circuit(n, 30, rng)
        for _ in range(5):
            c.measure(random_pauli(n, rng, 3))
        c.extend(random_unitary_circuit(n, 10, rng).ops)
        c.measure(random_pauli(n, rng))
        rep = cross_check(c, [i])
        assert rep.passed, rep.failures
        randoms += rep.random_measurements
    assert randoms > 0


def test_cross_check_detects_disagreement(monkeypatch):
    from anyonbraid.stabilizer import Tableau

    def broken_x(self, q):
        return self  # drops the sign update

    monkeypatch.setattr(Tableau, "x", broken_x)
    monkeypatch.setitem(Tableau._DISPATCH, "X", broken_x)
    c = Circuit(1).append("X", 0).measure(PauliString.single(1, 0, "Z"))
    assert not cross_check(c, [0]).passed
