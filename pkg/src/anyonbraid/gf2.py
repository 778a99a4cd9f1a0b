"""Linear algebra over GF(2) with rows stored as Python ints (bit i = column i)."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

__all__ = ["rank", "row_basis", "solve", "solve_system", "Eliminator", "bits", "mask"]


def bits(value: int) -> list[int]:
    """Indices of the set bits of ``value``, ascending."""
    out = []
    while value:
        low = value & -value
        out.append(low.bit_length() - 1)
        value ^= low
    return out


def mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m ^= 1 << i
    return m


class Eliminator:
    """Incremental row basis keyed by highest set bit.

    Every inserted row is reduced against the current basis. The combination
    of original rows that produced each basis vector is tracked, so the basis
    can express targets in terms of the inserted rows and report the kernel
    (dependencies among inserted rows).
    """

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[int, int]] = {}  # pivot -> (vector, combo)
        self.kernel: list[int] = []
        self.count = 0

    def reduce(self, vector: int) -> tuple[int, int]:
        combo = 0
        while vector:
            top = vector.bit_length() - 1
            entry = self.pivots.get(top)
            if entry is None:
                break
            vector ^= entry[0]
            combo ^= entry[1]
        return vector, combo

    def insert(self, vector: int) -> bool:
        """Add a row; return False if it was dependent on earlier rows."""
        index = self.count
        self.count += 1
        rest, combo = self.reduce(vector)
        combo ^= 1 << index
        if rest:
            self.pivots[rest.bit_length() - 1] = (rest, combo)
            return True
        self.kernel.append(combo)
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def express(self, target: int) -> int | None:
        """Combination (bitmask over inserted rows) summing to ``target``, or None."""
        rest, combo = self.reduce(target)
        return None if rest else combo


def rank(rows: Iterable[int]) -> int:
    elim = Eliminator()
    for r in rows:
        elim.insert(r)
    return elim.rank


def row_basis(rows: Sequence[int]) -> list[int]:
    """Indices of a maximal independent subset, greedily in input order."""
    elim = Eliminator()
    return [i for i, r in enumerate(rows) if elim.insert(r)]


def _canonical_key(combo: int) -> tuple[int, tuple[int, ...]]:
    members = tuple(bits(combo))
    return len(members), members


def solve(rows: Sequence[int], target: int, max_kernel_dim: int = 16) -> int | None:
    """Find a subset of ``rows`` whose XOR equals ``target``.

    Returns the subset as a bitmask over row indices, or None if ``target`` is
    outside the row span. When several subsets work, the one with the fewest
    rows wins, ties broken by the lexicographically smallest sorted index
    tuple. The search over equivalent subsets is exhaustive for kernels of
    dimension up to ``max_kernel_dim``; beyond that the kernel is only used
    for greedy reduction.
    """
    elim = Eliminator()
    for r in rows:
        elim.insert(r)
    base = elim.express(target)
    if base is None:
        return None
    kernel = elim.kernel
    if not kernel:
        return base
    if len(kernel) <= max_kernel_dim:
        best = base
        best_key = _canonical_key(base)
        for k in range(1, len(kernel) + 1):
            for subset in combinations(kernel, k):
                cand = base
                for vec in subset:
                    cand ^= vec
                key = _canonical_key(cand)
                if key < best_key:
                    best, best_key = cand, key
        return best
    # reduce against the kernel in echelon form on the lowest index
    basis: dict[int, int] = {}
    for vec in kernel:
        while vec:
            low = (vec & -vec).bit_length() - 1
            if low not in basis:
                basis[low] = vec
                break
            vec ^= basis[low]
    result = base
    for low in sorted(basis):
        if result >> low & 1:
            result ^= basis[low]
    return result


def solve_system(rows: Sequence[int], rhs: Sequence[int]) -> int | None:
    """Find a vector v with ``parity(rows[i] & v) == rhs[i]`` for every i.

    Free coordinates are set to zero. Returns None for inconsistent systems.
    """
    elim = Eliminator()
    for r in rows:
        elim.insert(r)
    for combo in elim.kernel:
        if sum(rhs[i] for i in bits(combo)) % 2:
            return None
    solution = 0
    # basis vectors only contain bits at or below their pivot
    for pivot in sorted(elim.pivots):
        vec, combo = elim.pivots[pivot]
        target = sum(rhs[i] for i in bits(combo)) % 2
        lower = vec ^ (1 << pivot)
        if ((lower & solution).bit_count() + target) % 2:
            solution |= 1 << pivot
    return solution
