"""Random circuit and stabilizer-group generators shared by the tests."""

import numpy as np

from anyonbraid.stabilizer import Circuit, PauliString, Tableau

SINGLE = ["H", "S", "SDG", "X", "Y", "Z"]


def random_unitary_circuit(n, depth, rng, two_qubit_fraction=0.4):
    c = Circuit(n)
    for _ in range(depth):
        if n > 1 and rng.random() < two_qubit_fraction:
            a, b = rng.choice(n, 2, replace=False)
            c.append(str(rng.choice(["CNOT", "CZ"])), int(a), int(b))
        else:
            c.append(str(rng.choice(SINGLE)), int(rng.integers(n)))
    return c


def random_pauli(n, rng, max_weight=None, hermitian=True):
    weight = int(rng.integers(1, (max_weight or n) + 1))
    qubits = rng.choice(n, min(weight, n), replace=False)
    ops = {int(q): str(rng.choice(list("XYZ"))) for q in qubits}
    p = PauliString.from_ops(n, ops)
    return p.with_phase(int(rng.choice([0, 2])) if hermitian else int(rng.integers(4)))


def random_stabilizer_group(n, rng):
    """Random complete generator list: random state, random recombination, random signs."""
    t = Tableau(n)
    t.apply_circuit(random_unitary_circuit(n, 6 * n + 5, rng))
    rows = t.stabilizers()
    gens = []
    for i in range(n):
        g = rows[i]
        for j in range(n):
            if j != i and rng.random() < 0.3 and j > i:
                g = g * rows[j]
        gens.append(g if rng.random() < 0.5 else -g)
    return gens
