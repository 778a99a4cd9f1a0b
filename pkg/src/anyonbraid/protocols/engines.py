"""Engine selection and helpers shared by the protocol drivers."""

from __future__ import annotations

from functools import lru_cache
from typing import Union

from .. import gf2
from ..errors import ProtocolError
from ..lattice import PlanarCode, validate
from ..stabilizer.circuit import Circuit
from ..stabilizer.synthesis import synthesize_circuit
from ..stabilizer.tableau import Tableau
from ..statevector import StateVector

State = Union[Tableau, StateVector]
ENGINES = ("tableau", "statevector")
_ROUND_TOL = 1e-9


class DegenerateCodeError(ProtocolError):
    """The code does not fix a unique ground state."""


def new_state(engine: str, n: int) -> State:
    if engine == "tableau":
        return Tableau(n)
    if engine == "statevector":
        return StateVector(n)
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def engine_name(state: State) -> str:
    return "tableau" if isinstance(state, Tableau) else "statevector"


def as_eigenvalue(value: float) -> int:
    """Map an expectation value onto {+1, -1, 0}."""
    for target in (1, -1, 0):
        if abs(value - target) < _ROUND_TOL:
            return target
    raise ProtocolError(f"expectation value {value!r} is not that of a stabilizer state")


@lru_cache(maxsize=64)
def ground_state_circuit(code: PlanarCode) -> Circuit:
    report = validate(code)
    if not report.commuting:
        raise DegenerateCodeError(f"code {code.name}: generators do not commute")
    if report.logical_qubits:
        raise DegenerateCodeError(
            f"code {code.name} has {report.logical_qubits} logical qubits; ground state not unique")
    gens = code.generators()
    n = code.n_edges
    basis = gf2.row_basis([g.x | g.z << n for g in gens])
    return synthesize_circuit([gens[i] for i in basis])


@lru_cache(maxsize=16)
def _tableau_ground_state(code: PlanarCode) -> Tableau:
    t = Tableau(code.n_edges)
    t.apply_circuit(ground_state_circuit(code))
    return t


def prepare_ground_state(code: PlanarCode, engine: str = "tableau") -> State:
    """Fresh ground state of ``code`` on the chosen engine (caller owns it)."""
    circuit = ground_state_circuit(code)
    if engine == "tableau":
        return _tableau_ground_state(code).copy()
    state = new_state(engine, code.n_edges)
    state.apply_circuit(circuit)
    return state


def syndrome(state: State, code: PlanarCode) -> dict[str, int]:
    """Eigenvalue (+1, -1, or 0 if indeterminate) of every generator; non-destructive."""
    if state.n != code.n_edges:
        raise ProtocolError(f"state has {state.n} qubits but code {code.name} has {code.n_edges} edges")
    values = state.expectations(code.generators())
    return {name: as_eigenvalue(v) for name, v in zip(code.generator_names(), values)}
