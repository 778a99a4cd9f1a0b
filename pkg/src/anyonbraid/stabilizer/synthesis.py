"""Preparation circuits for stabilizer states given by generator lists."""

from __future__ import annotations

from typing import Sequence

from .. import gf2
from ..errors import StabilizerError
from .circuit import INVERSE, Circuit, Gate
from .pauli import PauliString, conjugate, pauli_mul
from .tableau import Tableau

__all__ = ["check_generators", "anticommuting_pairs", "synthesize_circuit", "state_from_generators"]


def anticommuting_pairs(paulis: Sequence[PauliString]) -> list[tuple[int, int]]:
    """All index pairs (i < j) of anticommuting operators.

    Works qubit by qubit so the cost follows the overlap structure, which keeps
    sparse lattice generators cheap.
    """
    if not paulis:
        return []
    n = paulis[0].n
    with_x: list[list[int]] = [[] for _ in range(n)]
    with_z: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(paulis):
        for q in gf2.bits(p.x):
            with_x[q].append(i)
        for q in gf2.bits(p.z):
            with_z[q].append(i)
    parity: dict[tuple[int, int], int] = {}
    for q in range(n):
        for i in with_x[q]:
            for j in with_z[q]:
                if i != j:
                    key = (i, j) if i < j else (j, i)
                    parity[key] = parity.get(key, 0) ^ 1
    return sorted(k for k, v in parity.items() if v)


def check_generators(gens: Sequence[PauliString]) -> int:
    """Validate a complete generator list and return the qubit count."""
    if not gens:
        raise StabilizerError("empty generator list")
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise StabilizerError("generators act on different qubit counts")
        if not g.is_hermitian:
            raise StabilizerError(f"generator {g} has an imaginary sign")
    if len(gens) != n:
        raise StabilizerError(f"need exactly {n} generators for a unique state, got {len(gens)}")
    bad = anticommuting_pairs(gens)
    if bad:
        i, j = bad[0]
        raise StabilizerError(f"generators {i + 1} and {j + 1} anticommute")
    if gf2.rank(g.x | g.z << n for g in gens) != n:
        raise StabilizerError("generators are not independent")
    return n


def _simplify(ops: list[Gate]) -> list[Gate]:
    """Cancel adjacent inverse pairs (adjacent per qubit)."""
    out: list[Gate | None] = []
    stacks: dict[int, list[int]] = {}
    for g in ops:
        tops = [stacks.get(q, [None])[-1] if stacks.get(q) else None for q in g.qubits]
        if tops and tops[0] is not None and all(t == tops[0] for t in tops):
            prev = out[tops[0]]
            same_operands = prev.qubits == g.qubits or (g.name == "CZ" and set(prev.qubits) == set(g.qubits))
            if len(prev.qubits) == len(g.qubits) and same_operands and prev.name == INVERSE[g.name]:
                out[tops[0]] = None
                for q in g.qubits:
                    stacks[q].pop()
                continue
        out.append(g)
        for q in g.qubits:
            stacks.setdefault(q, []).append(len(out) - 1)
    return [g for g in out if g is not None]


def _synthesize_css(x_gens: list[PauliString], z_gens: list[PauliString], n: int) -> list[Gate]:
    # Highest-bit echelon form: a basis row with pivot p only has bits below p,
    # so encoding rows in ascending pivot order never disturbs finished rows.
    elim = gf2.Eliminator()
    for g in x_gens:
        elim.insert(g.x)
    ops = []
    pivots = sorted(elim.pivots)
    ops.extend(Gate("H", (p,)) for p in pivots)
    for p in pivots:
        vec = elim.pivots[p][0]
        ops.extend(Gate("CNOT", (p, t)) for t in gf2.bits(vec ^ (1 << p)))
    # The encoder yields every generator with sign +1; fix negative ones.
    x_rhs = [int(g.phase == 2) for g in x_gens]
    z_rhs = [int(g.phase == 2) for g in z_gens]
    if any(x_rhs):
        zfix = gf2.solve_system([g.x for g in x_gens], x_rhs)
        ops.extend(Gate("Z", (q,)) for q in gf2.bits(zfix))
    if any(z_rhs):
        xfix = gf2.solve_system([g.z for g in z_gens], z_rhs)
        ops.extend(Gate("X", (q,)) for q in gf2.bits(xfix))
    return ops


def _synthesize_general(gens: Sequence[PauliString], n: int) -> list[Gate]:
    """Reduce the target group to <Z_1..Z_n>; the preparation is the inverse."""
    rows = list(gens)
    reduction: list[Gate] = []

    def apply(name: str, *qubits: int) -> None:
        reduction.append(Gate(name, qubits))
        rows[:] = [conjugate(r, name, qubits) for r in rows]

    def eliminate(part: str, columns: Sequence[int], start: int) -> list[int]:
        k = start
        found = []
        for q in columns:
            hit = next((i for i in range(k, n) if getattr(rows[i], part) >> q & 1), None)
            if hit is None:
                continue
            rows[k], rows[hit] = rows[hit], rows[k]
            for i in range(n):
                if i != k and getattr(rows[i], part) >> q & 1:
                    rows[i] = pauli_mul(rows[i], rows[k])
            found.append(q)
            k += 1
        return found

    x_pivots = eliminate("x", range(n), 0)
    if len(x_pivots) < n:
        # Z-only rows are independent outside the X pivots; Hadamard their pivots.
        rest = [q for q in range(n) if q not in set(x_pivots)]
        z_pivots = eliminate("z", rest, len(x_pivots))
        for q in z_pivots:
            apply("H", q)
        x_pivots = eliminate("x", range(n), 0)
        if len(x_pivots) != n:
            raise StabilizerError("internal: X part not full rank after Hadamards")
    for i in range(n):
        if rows[i].z >> i & 1:
            apply("SDG", i)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i].z >> j & 1:
                apply("CZ", i, j)
    for i in range(n):
        apply("H", i)
    for i in range(n):
        if rows[i].phase == 2:
            apply("X", i)
    for i, r in enumerate(rows):
        if r != PauliString(n, 0, 1 << i):
            raise StabilizerError("internal: reduction did not reach |0...0>")
    return [g.inverse() for g in reversed(reduction)]


def synthesize_circuit(gens: Sequence[PauliString]) -> Circuit:
    """Clifford circuit mapping ``|0...0>`` to the state stabilized by ``gens``.

    Generator lists made only of X-type and Z-type operators take a CSS
    encoder (Hadamards on echelon pivots, CNOT fan-outs, Pauli sign fixes).
    Anything else goes through a graph-state reduction.
    """
    n = check_generators(gens)
    x_gens = [g for g in gens if g.z == 0]
    z_gens = [g for g in gens if g.x == 0]
    if len(x_gens) + len(z_gens) == n:
        ops = _synthesize_css(x_gens, z_gens, n)
    else:
        ops = _synthesize_general(gens, n)
    return Circuit(n, _simplify(ops))


def state_from_generators(gens: Sequence[PauliString]) -> Tableau:
    circuit = synthesize_circuit(gens)
    t = Tableau(circuit.n)
    t.apply_circuit(circuit)
    return t
