"""Exact Clifford simulation: Pauli algebra, tableau states and synthesis."""

from .circuit import Circuit, Gate
from .pauli import PauliString, commutes, conjugate, pauli_mul
from .synthesis import anticommuting_pairs, check_generators, state_from_generators, synthesize_circuit
from .tableau import Measurement, Tableau, apply_gate, expectation, measure_pauli, new_tableau

__all__ = [
    "Circuit", "Gate", "PauliString", "commutes", "conjugate", "pauli_mul",
    "anticommuting_pairs", "check_generators", "state_from_generators", "synthesize_circuit",
    "Measurement", "Tableau", "apply_gate", "expectation", "measure_pauli", "new_tableau",
]
