"""Signed Pauli strings on n qubits.

A Pauli string is ``i**phase`` times a tensor product of I, X, Y, Z. Qubit j
carries X if only bit j of ``x`` is set, Z if only bit j of ``z`` is set and Y
if both are. With ``Y = iXZ`` this fixes the product convention
``X * Z = -iY`` used everywhere in the package.

Text forms use 1-based qubit labels: ``+X1*X2*X3``, ``-Z4``, ``+iY2``, ``+I``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from ..errors import StabilizerError

__all__ = ["PauliString", "pauli_mul", "commutes", "conjugate"]

_SIGNS = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_FACTOR = re.compile(r"([IXYZ])(\d+)")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise StabilizerError("qubit count must be non-negative")
        limit = 1 << self.n
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise StabilizerError("Pauli masks exceed qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, op: str, sign: int = 1) -> "PauliString":
        return cls.from_ops(n, {qubit: op}, sign)

    @classmethod
    def from_ops(cls, n: int, ops: dict[int, str] | Iterable[tuple[int, str]], sign: int = 1) -> "PauliString":
        """Build from a 0-based ``{qubit: 'X'|'Y'|'Z'|'I'}`` mapping."""
        items = ops.items() if isinstance(ops, dict) else ops
        x = z = 0
        for q, op in items:
            if not 0 <= q < n:
                raise StabilizerError(f"qubit {q} out of range for n={n}")
            bit = 1 << q
            if op in "XY":
                x ^= bit
            if op in "ZY":
                z ^= bit
            if op not in "IXYZ":
                raise StabilizerError(f"unknown Pauli {op!r}")
        return cls(n, x, z, _sign_to_phase(sign))

    @classmethod
    def x_string(cls, n: int, qubits: Iterable[int], sign: int = 1) -> "PauliString":
        m = 0
        for q in qubits:
            m ^= 1 << q
        return cls(n, m, 0, _sign_to_phase(sign))

    @classmethod
    def z_string(cls, n: int, qubits: Iterable[int], sign: int = 1) -> "PauliString":
        m = 0
        for q in qubits:
            m ^= 1 << q
        return cls(n, 0, m, _sign_to_phase(sign))

    @classmethod
    def from_dense(cls, text: str) -> "PauliString":
        """Parse ``'+XIZY'`` style strings (leftmost letter is qubit 0)."""
        sign, body = _split_sign(text.strip())
        return cls.from_ops(len(body), list(enumerate(body))).with_phase(sign)

    @classmethod
    def parse(cls, text: str, n: int) -> "PauliString":
        """Parse the sparse 1-based form, e.g. ``'+X1*X2*X3'``."""
        phase, body = _split_sign(text.strip())
        ops: dict[int, str] = {}
        if body not in ("", "I"):
            for factor in body.split("*"):
                m = _FACTOR.fullmatch(factor.strip())
                if not m:
                    raise StabilizerError(f"bad Pauli factor {factor!r} in {text!r}")
                q = int(m.group(2)) - 1
                if q in ops:
                    raise StabilizerError(f"qubit {q + 1} repeated in {text!r}")
                ops[q] = m.group(1)
        return cls.from_ops(n, ops).with_phase(phase)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.n, self.x, self.z, phase)

    # properties -------------------------------------------------------
    @property
    def sign(self) -> complex | int:
        return {0: 1, 1: 1j, 2: -1, 3: -1j}[self.phase]

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def op(self, qubit: int) -> str:
        return "IXZY"[(self.x >> qubit & 1) | (self.z >> qubit & 1) << 1]

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def commutes(self, other: "PauliString") -> bool:
        return commutes(self, other)

    # formatting -------------------------------------------------------
    def to_dense(self) -> str:
        return _SIGNS[self.phase] + "".join(self.op(q) for q in range(self.n))

    def to_sparse(self) -> str:
        """1-based sparse form used by the circuit text format."""
        factors = [f"{self.op(q)}{q + 1}" for q in range(self.n) if self.support >> q & 1]
        return _SIGNS[self.phase] + ("*".join(factors) if factors else "I")

    def __str__(self) -> str:
        return self.to_sparse()


def _sign_to_phase(sign) -> int:
    try:
        return {1: 0, 1j: 1, -1: 2, -1j: 3}[sign]
    except KeyError:
        raise StabilizerError(f"sign must be one of +-1, +-i, got {sign!r}") from None


def _split_sign(text: str) -> tuple[int, str]:
    for prefix, phase in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
        if text.startswith(prefix):
            return phase, text[len(prefix):]
    return 0, text


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise StabilizerError(f"size mismatch: {a.n} vs {b.n} qubits")


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a * b``.

    In the form ``i**k X^x Z^z`` the product only picks up ``(-1)**|z_a & x_b|``;
    converting back to the Y-letter form subtracts one unit per Y.
    """
    _check_sizes(a, b)
    k = (a.phase + (a.x & a.z).bit_count() + b.phase + (b.x & b.z).bit_count()
         + 2 * (a.z & b.x).bit_count())
    x = a.x ^ b.x
    z = a.z ^ b.z
    return PauliString(a.n, x, z, k - (x & z).bit_count())


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_sizes(a, b)
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


def conjugate(p: PauliString, name: str, qubits: tuple[int, ...]) -> PauliString:
    """Return ``U p U^dagger`` for a Clifford gate ``U`` given by name (0-based qubits)."""
    x, z, n = p.x, p.z, p.n
    flip = 0
    if name in ("X", "Y", "Z"):
        a = qubits[0]
        xa, za = x >> a & 1, z >> a & 1
        flip = {"X": za, "Z": xa, "Y": xa ^ za}[name]
        return PauliString(n, x, z, p.phase + 2 * flip)
    if name == "H":
        a = qubits[0]
        xa, za = x >> a & 1, z >> a & 1
        flip = xa & za
        if xa != za:
            x ^= 1 << a
            z ^= 1 << a
    elif name in ("S", "SDG"):
        a = qubits[0]
        xa, za = x >> a & 1, z >> a & 1
        flip = xa & za if name == "S" else xa & (za ^ 1)
        z ^= xa << a
    elif name == "CNOT":
        a, b = qubits
        xa, za, xb, zb = x >> a & 1, z >> a & 1, x >> b & 1, z >> b & 1
        flip = xa & zb & (xb ^ za ^ 1)
        x ^= xa << b
        z ^= zb << a
    elif name == "CZ":
        a, b = qubits
        xa, za, xb, zb = x >> a & 1, z >> a & 1, x >> b & 1, z >> b & 1
        flip = xa & xb & (za ^ zb)
        z ^= (xb << a) | (xa << b)
    else:
        raise StabilizerError(f"unknown gate {name!r}")
    return PauliString(n, x, z, p.phase + 2 * flip)
