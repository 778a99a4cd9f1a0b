"""Dense state-vector simulator used as an independent oracle.

Amplitude ordering: qubit 0 (label 1) is the most significant bit of the
basis index, so the amplitude tensor has shape ``(2,) * n`` with axis q
belonging to qubit q.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError, StabilizerError
from .stabilizer.circuit import Circuit, Gate
from .stabilizer.pauli import PauliString
from .stabilizer.tableau import Measurement, Tableau

__all__ = [
    "StateVector", "default_cap", "sv_apply", "sv_expectation", "sv_overlap",
    "cross_check", "CrossCheckReport", "dump_state", "load_state",
]

DEFAULT_CAP = 20
DETERMINISTIC_TOL = 1e-10

_S2 = 1 / np.sqrt(2)
_UNITARIES = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def default_cap() -> int:
    raw = os.environ.get("ANYONBRAID_SV_CAP")
    return int(raw) if raw else DEFAULT_CAP


class StateVector:
    def __init__(self, n: int, amplitudes: np.ndarray | None = None, cap: int | None = None):
        cap = default_cap() if cap is None else cap
        if n < 1:
            raise StabilizerError("a state needs at least one qubit")
        if n > cap:
            raise CapExceededError(f"{n} qubits exceeds the state-vector cap of {cap}")
        self.n = n
        self.cap = cap
        if amplitudes is None:
            psi = np.zeros(2**n, dtype=complex)
            psi[0] = 1
        else:
            psi = np.asarray(amplitudes, dtype=complex).reshape(-1).copy()
            if psi.size != 2**n:
                raise StabilizerError("amplitude count does not match qubit count")
        self.psi = psi.reshape((2,) * n)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.psi.reshape(-1)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes, self.cap)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise StabilizerError(f"qubit {q} out of range for n={self.n}")

    def _single(self, u: np.ndarray, q: int) -> "StateVector":
        self._check_qubit(q)
        self.psi = np.moveaxis(np.tensordot(u, self.psi, axes=([1], [q])), 0, q)
        return self

    def h(self, q): return self._single(_UNITARIES["H"], q)
    def s(self, q): return self._single(_UNITARIES["S"], q)
    def sdg(self, q): return self._single(_UNITARIES["SDG"], q)
    def x(self, q): return self._single(_UNITARIES["X"], q)
    def y(self, q): return self._single(_UNITARIES["Y"], q)
    def z(self, q): return self._single(_UNITARIES["Z"], q)

    def _index(self, fixed: dict[int, int]) -> tuple:
        idx: list = [slice(None)] * self.n
        for q, v in fixed.items():
            idx[q] = v
        return tuple(idx)

    def cz(self, a: int, b: int) -> "StateVector":
        self._pair(a, b)
        self.psi[self._index({a: 1, b: 1})] *= -1
        return self

    def cnot(self, a: int, b: int) -> "StateVector":
        self._pair(a, b)
        one0 = self._index({a: 1, b: 0})
        one1 = self._index({a: 1, b: 1})
        tmp = self.psi[one0].copy()
        self.psi[one0] = self.psi[one1]
        self.psi[one1] = tmp
        return self

    def _pair(self, a: int, b: int) -> None:
        self._check_qubit(a)
        self._check_qubit(b)
        if a == b:
            raise StabilizerError("two-qubit gate needs distinct operands")

    _DISPATCH = {"H": h, "S": s, "SDG": sdg, "X": x, "Y": y, "Z": z, "CNOT": cnot, "CZ": cz}

    def apply_gate(self, gate: Gate, rng=None) -> Measurement | None:
        if gate.is_measurement:
            return self.measure_pauli(gate.pauli, rng)
        self._DISPATCH[gate.name](self, *gate.qubits)
        return None

    def apply_circuit(self, circuit, rng=None) -> list[Measurement]:
        out = []
        for g in circuit:
            m = self.apply_gate(g, rng)
            if m is not None:
                out.append(m)
        return out

    # Pauli operators ----------------------------------------------------
    def _pauli_image(self, p: PauliString) -> np.ndarray:
        if p.n != self.n:
            raise StabilizerError(f"size mismatch: Pauli on {p.n} qubits, state on {self.n}")
        out = self.psi
        for q in range(self.n):
            op = p.op(q)
            if op != "I":
                out = np.moveaxis(np.tensordot(_UNITARIES[op], out, axes=([1], [q])), 0, q)
        return p.sign * out

    def apply_pauli(self, p: PauliString) -> "StateVector":
        self.psi = self._pauli_image(p)
        return self

    def expectation(self, p: PauliString) -> float:
        if not p.is_hermitian:
            raise StabilizerError(f"cannot measure non-Hermitian Pauli {p}")
        return float(np.vdot(self.psi, self._pauli_image(p)).real)

    def expectations(self, paulis) -> list[float]:
        return [self.expectation(p) for p in paulis]

    def probability(self, p: PauliString, outcome: int = 1) -> float:
        return (1 + outcome * self.expectation(p)) / 2

    def measure_pauli(self, p: PauliString, rng=None, outcome: int | None = None) -> Measurement:
        """Projective measurement; same randomness rule as the tableau engine."""
        prob_plus = self.probability(p, 1)
        if abs(prob_plus - 1) < DETERMINISTIC_TOL:
            return Measurement(1, True)
        if abs(prob_plus) < DETERMINISTIC_TOL:
            return Measurement(-1, True)
        if outcome is None:
            if rng is None or isinstance(rng, (int, np.integer)):
                rng = np.random.default_rng(rng)
            outcome = 1 - 2 * int(rng.integers(2))
        image = self._pauli_image(p)
        projected = (self.psi + outcome * image) / 2
        self.psi = projected / np.linalg.norm(projected)
        return Measurement(outcome, False)

    def project_out(self, qubit: int, p_single: str, outcome: int) -> "StateVector":
        """Drop a qubit known to be in the ``outcome`` eigenstate of X, Y or Z."""
        self._check_qubit(qubit)
        vals, vecs = np.linalg.eigh(_UNITARIES[p_single])
        vec = vecs[:, int(np.argmin(np.abs(vals - outcome)))]
        reduced = np.tensordot(vec.conj(), self.psi, axes=([0], [qubit]))
        norm = np.linalg.norm(reduced)
        if abs(norm - 1) > 1e-8:
            raise StabilizerError(f"qubit {qubit} is not in a product eigenstate")
        return StateVector(self.n - 1, reduced / norm, self.cap)


def sv_apply(s: StateVector, g: Gate) -> StateVector:
    s.apply_gate(g)
    return s


def sv_expectation(s: StateVector, p: PauliString) -> float:
    return s.expectation(p)


def sv_overlap(a: StateVector, b: StateVector) -> complex:
    if a.n != b.n:
        raise StabilizerError(f"size mismatch: {a.n} vs {b.n} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def dump_state(s: StateVector) -> bytes:
    """8-byte little-endian qubit count, then interleaved (re, im) doubles."""
    amps = s.amplitudes.astype("<c16")
    return struct.pack("<q", s.n) + amps.tobytes()


def load_state(data: bytes) -> StateVector:
    (n,) = struct.unpack("<q", data[:8])
    amps = np.frombuffer(data[8:], dtype="<c16")
    return StateVector(n, amps, cap=max(n, default_cap()))


# cross-checking ----------------------------------------------------------

@dataclass
class CrossCheckReport:
    n: int
    seeds: list[int]
    checks: int = 0
    measurements: int = 0
    random_measurements: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "n": self.n, "seeds": self.seeds, "checks": self.checks,
            "measurements": self.measurements, "random_measurements": self.random_measurements,
            "passed": self.passed, "failures": self.failures,
        }


def compare_states(t: Tableau, s: StateVector, tol: float = 1e-10) -> list[str]:
    """Single-qubit Pauli expectations and stabilizer fidelity, engine vs oracle."""
    problems = []
    for q in range(t.n):
        for op in "XYZ":
            p = PauliString.single(t.n, q, op)
            a, b = t.expectation(p), s.expectation(p)
            if abs(a - b) > tol:
                problems.append(f"<{op}{q + 1}>: tableau {a}, statevector {b:.12g}")
    for g in t.stabilizers():
        value = s.expectation(g)
        if abs(value - 1) > tol:
            problems.append(f"stabilizer {g} has statevector expectation {value:.12g}")
    return problems


def cross_check(c: Circuit, seeds, prob_tol: float = 1e-12, tol: float = 1e-10) -> CrossCheckReport:
    """Run ``c`` on both engines for every seed and compare them step by step."""
    seeds = list(seeds)
    if c.n > default_cap():
        raise CapExceededError(f"{c.n} qubits exceeds the state-vector cap of {default_cap()}")
    report = CrossCheckReport(c.n, seeds)
    for seed in seeds:
        rng = np.random.default_rng(seed)
        t, s = Tableau(c.n), StateVector(c.n)
        for step, g in enumerate(c.ops):
            if not g.is_measurement:
                t.apply_gate(g)
                s.apply_gate(g)
                continue
            report.measurements += 1
            prob_plus = s.probability(g.pauli, 1)
            m = t.measure_pauli(g.pauli, rng)
            tag = f"seed {seed} op {step + 1} ({g.to_text()})"
            if m.deterministic:
                if abs(s.probability(g.pauli, m.outcome) - 1) > tol:
                    report.failures.append(f"{tag}: tableau forced {m.outcome:+d}, oracle P(+1)={prob_plus:.12g}")
            else:
                report.random_measurements += 1
                if abs(prob_plus - 0.5) > prob_tol:
                    report.failures.append(f"{tag}: random on tableau, oracle P(+1)={prob_plus:.15g}")
            s.measure_pauli(g.pauli, outcome=m.outcome)
            report.checks += 1
            report.failures.extend(f"{tag}: {p}" for p in compare_states(t, s, tol))
        report.checks += 1
        if abs(s.norm() - 1) > tol:
            report.failures.append(f"seed {seed}: norm drifted to {s.norm():.15g}")
        report.failures.extend(f"seed {seed} final: {p}" for p in compare_states(t, s, tol))
    return report
