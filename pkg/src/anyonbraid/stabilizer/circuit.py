"""Clifford circuits with Pauli-product measurements.

Text format, one op per line, 1-based qubits::

    H 3
    CZ 1 2
    MEASURE +X1*X2*X3

Blank lines and ``#`` comments are ignored. A leading ``QUBITS n`` line fixes
the register size; without it the size is the largest index used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from ..errors import StabilizerError
from .pauli import PauliString

__all__ = ["Gate", "Circuit", "SINGLE_QUBIT_GATES", "TWO_QUBIT_GATES", "INVERSE"]

SINGLE_QUBIT_GATES = ("H", "S", "SDG", "X", "Y", "Z")
TWO_QUBIT_GATES = ("CZ", "CNOT")
INVERSE = {"H": "H", "S": "SDG", "SDG": "S", "X": "X", "Y": "Y", "Z": "Z", "CZ": "CZ", "CNOT": "CNOT"}
_ALIASES = {"SQRTZ": "S", "S_DAG": "SDG", "CX": "CNOT", "CPF": "CZ"}


class Gate(NamedTuple):
    """A circuit op. ``qubits`` are 0-based; ``pauli`` is set only for MEASURE."""

    name: str
    qubits: tuple[int, ...] = ()
    pauli: PauliString | None = None

    @property
    def is_measurement(self) -> bool:
        return self.name == "MEASURE"

    def to_text(self) -> str:
        if self.is_measurement:
            return f"MEASURE {self.pauli.to_sparse()}"
        return " ".join([self.name, *(str(q + 1) for q in self.qubits)])

    def inverse(self) -> "Gate":
        if self.is_measurement:
            raise StabilizerError("measurements have no inverse")
        return Gate(INVERSE[self.name], self.qubits)


def _check(gate: Gate, n: int) -> None:
    if gate.is_measurement:
        if gate.pauli is None or gate.pauli.n != n:
            raise StabilizerError("measured Pauli must act on the circuit register")
        return
    if gate.name in SINGLE_QUBIT_GATES:
        arity = 1
    elif gate.name in TWO_QUBIT_GATES:
        arity = 2
    else:
        raise StabilizerError(f"unknown gate {gate.name!r}")
    if len(gate.qubits) != arity:
        raise StabilizerError(f"{gate.name} takes {arity} qubit(s), got {len(gate.qubits)}")
    for q in gate.qubits:
        if not 0 <= q < n:
            raise StabilizerError(f"qubit {q + 1} out of range for a {n}-qubit circuit")
    if arity == 2 and gate.qubits[0] == gate.qubits[1]:
        raise StabilizerError(f"{gate.name} needs distinct operands")


@dataclass
class Circuit:
    n: int
    ops: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise StabilizerError("a circuit needs at least one qubit")
        for g in self.ops:
            _check(g, self.n)

    def append(self, name: str, *qubits: int) -> "Circuit":
        g = Gate(_ALIASES.get(name.upper(), name.upper()), tuple(qubits))
        _check(g, self.n)
        self.ops.append(g)
        return self

    def measure(self, pauli: PauliString) -> "Circuit":
        g = Gate("MEASURE", (), pauli)
        _check(g, self.n)
        self.ops.append(g)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            _check(g, self.n)
            self.ops.append(g)
        return self

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def count(self, *names: str) -> int:
        return sum(1 for g in self.ops if g.name in names)

    @property
    def two_qubit_count(self) -> int:
        return self.count(*TWO_QUBIT_GATES)

    def inverse(self) -> "Circuit":
        return Circuit(self.n, [g.inverse() for g in reversed(self.ops)])

    def to_text(self, header: bool = True) -> str:
        lines = [f"QUBITS {self.n}"] if header else []
        lines.extend(g.to_text() for g in self.ops)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "Circuit":
        parsed: list[tuple[int, str, list[str]]] = []
        declared = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            head = head.upper()
            if head == "QUBITS":
                declared = int(rest[0])
                continue
            parsed.append((lineno, head, rest))
        size = n or declared
        if size is None:
            size = 0
            for _, head, rest in parsed:
                if head == "MEASURE":
                    size = max([size] + [int(d) for d in _digits(rest[0])])
                else:
                    size = max([size] + [int(a) for a in rest])
        circuit = cls(max(size, 1))
        for lineno, head, rest in parsed:
            try:
                if head == "MEASURE":
                    if len(rest) != 1:
                        raise StabilizerError("MEASURE takes one Pauli string")
                    circuit.measure(PauliString.parse(rest[0], circuit.n))
                else:
                    circuit.append(head, *(int(a) - 1 for a in rest))
            except (ValueError, StabilizerError) as exc:
                raise StabilizerError(f"line {lineno}: {exc}") from None
        return circuit


def _digits(token: str) -> list[str]:
    return re.findall(r"\d+", token)
