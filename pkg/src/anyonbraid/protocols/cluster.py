"""Planar-code ground state from single-qubit measurements on a cluster state.

The cluster lives on a ``2*rows x 2*cols`` grid; site ``(a, b)`` is qubit
``a * 2*cols + b``. Mixed-parity sites are kept and become the code's edges,
``h(i, j) -> (2i, 2j+1)`` and ``v(i, j) -> (2i+1, 2j)``. Even-even sites sit
on code vertices and are measured in Z; odd-odd sites sit on code faces and
are measured in X. An X outcome on a face-site leaves ``+-Z`` on the
surrounding edges, which is how the boundary operators appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .. import gf2
from ..errors import InvalidLatticeError, ProtocolError
from ..lattice import PlanarCode, square_lattice
from ..stabilizer.pauli import PauliString
from ..stabilizer.synthesis import state_from_generators
from ..stabilizer.tableau import Tableau
from ..statevector import StateVector
from .engines import syndrome

__all__ = ["ClusterPattern", "ClusterResult", "FixupUnsolvableError", "build_cluster_pattern",
           "prepare_via_cluster", "cluster_stabilizers"]


class FixupUnsolvableError(ProtocolError):
    """No Pauli correction restores all signs; the pattern itself is wrong."""


@dataclass(frozen=True)
class ClusterPattern:
    rows: int
    cols: int
    grid_rows: int
    grid_cols: int
    vertex_sites: tuple[int, ...]   # measured in Z, ordered like the code's vertices
    face_sites: tuple[int, ...]     # measured in X, ordered like the code's faces
    kept_sites: tuple[int, ...]     # kept_sites[e] carries code edge e (0-based)
    code: PlanarCode

    @property
    def n_sites(self) -> int:
        return self.grid_rows * self.grid_cols

    def site(self, a: int, b: int) -> int:
        return a * self.grid_cols + b

    def coords(self, q: int) -> tuple[int, int]:
        return divmod(q, self.grid_cols)

    def neighbours(self, q: int) -> list[int]:
        a, b = self.coords(q)
        out = []
        for da, db in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            aa, bb = a + da, b + db
            if 0 <= aa < self.grid_rows and 0 <= bb < self.grid_cols:
                out.append(self.site(aa, bb))
        return out

    def grid_edges(self) -> list[tuple[int, int]]:
        return [(q, r) for q in range(self.n_sites) for r in self.neighbours(q) if q < r]

    def measured(self) -> dict[int, str]:
        """Measured site -> single-qubit basis letter."""
        out = {q: "Z" for q in self.vertex_sites}
        out.update({q: "X" for q in self.face_sites})
        return out

    def to_dict(self) -> dict:
        return {
            "rows": self.rows, "cols": self.cols,
            "grid": [self.grid_rows, self.grid_cols],
            "vertex_sites": list(self.vertex_sites),
            "face_sites": list(self.face_sites),
            "kept_sites": list(self.kept_sites),
        }


def build_cluster_pattern(rows: int, cols: int) -> ClusterPattern:
    if rows < 2 or cols < 2:
        raise InvalidLatticeError(f"cluster pattern needs rows, cols >= 2, got {rows}x{cols}")
    gc = 2 * cols
    site = lambda a, b: a * gc + b  # noqa: E731
    kept = []
    for i in range(rows):
        for j in range(cols):
            kept += [site(2 * i, 2 * j + 1), site(2 * i + 1, 2 * j)]
    vertices = tuple(site(2 * i, 2 * j) for i in range(rows) for j in range(cols))
    faces = tuple(site(2 * i + 1, 2 * j + 1) for i in range(rows) for j in range(cols))
    return ClusterPattern(rows, cols, 2 * rows, gc, vertices, faces, tuple(kept),
                          square_lattice(rows, cols, "planar"))


def cluster_stabilizers(pattern: ClusterPattern) -> list[PauliString]:
    n = pattern.n_sites
    return [PauliString(n, 1 << q, gf2.mask(pattern.neighbours(q))) for q in range(n)]


def _lift(pattern: ClusterPattern, g: PauliString) -> PauliString:
    """Code-edge Pauli -> the same Pauli on the kept cluster sites."""
    x = z = 0
    for e, q in enumerate(pattern.kept_sites):
        x |= (g.x >> e & 1) << q
        z |= (g.z >> e & 1) << q
    return PauliString(pattern.n_sites, x, z, g.phase)


def _lower(pattern: ClusterPattern, p: PauliString) -> PauliString:
    x = z = 0
    for e, q in enumerate(pattern.kept_sites):
        x |= (p.x >> q & 1) << e
        z |= (p.z >> q & 1) << e
    return PauliString(pattern.code.n_edges, x, z, p.phase)


def _single(n: int, q: int, letter: str) -> PauliString:
    return PauliString.single(n, q, letter)


def _byproduct_relations(pattern: ClusterPattern) -> list[tuple[PauliString, list[int]]]:
    """For each code generator g: (kept-site Pauli K, measured sites M) with
    product(cluster stabilizers) == K * prod(M letters), K = +-lift(g).
    """
    n = pattern.n_sites
    stabs = cluster_stabilizers(pattern)
    measured = pattern.measured()
    nbr_mask = [gf2.mask(pattern.neighbours(q)) for q in range(n)]
    out = []
    for g in pattern.code.generators():
        lifted = _lift(pattern, g)
        rows, rhs = [], []
        # unknown c: X part of the product is c itself, Z part is adjacency(c)
        for q in range(n):
            letter = measured.get(q)
            if letter is None:
                rows += [1 << q, nbr_mask[q]]
                rhs += [lifted.x >> q & 1, lifted.z >> q & 1]
            elif letter == "Z":
                rows.append(1 << q)
                rhs.append(0)
            else:
                rows.append(nbr_mask[q])
                rhs.append(0)
        combo = gf2.solve_system(rows, rhs)
        if combo is None:
            raise FixupUnsolvableError(f"generator {g} is not reachable from the cluster stabilizers")
        prod = PauliString.identity(n)
        for q in gf2.bits(combo):
            prod = prod * stabs[q]
        sites = [q for q in sorted(measured) if (prod.x | prod.z) >> q & 1]
        kept = prod
        for q in sites:
            kept = kept * _single(n, q, measured[q])
        out.append((kept, sites))
    return out


@dataclass
class ClusterResult:
    state: Any
    fixups: PauliString
    outcomes: dict[int, int]
    predicted_signs: dict[str, int]
    syndrome: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "fixups": str(self.fixups),
            "outcomes": {str(k): v for k, v in sorted(self.outcomes.items())},
            "predicted_signs": self.predicted_signs,
            "syndrome": self.syndrome,
        }


def _restrict_tableau(t: Tableau, pattern: ClusterPattern, outcomes: dict[int, int]) -> Tableau:
    measured = pattern.measured()
    n = t.n
    singles = {q: _single(n, q, letter) for q, letter in measured.items()}
    kept_rows = []
    for row in t.stabilizers():
        for q, letter in measured.items():
            if row.op(q) != "I":
                if row.op(q) != letter:
                    raise ProtocolError(f"internal: site {q} not in a product eigenstate")
                row = row * singles[q]
                if outcomes[q] == -1:
                    row = -row
        lowered = _lower(pattern, row)
        if lowered.x or lowered.z:
            kept_rows.append(lowered)
        elif lowered.phase:
            raise ProtocolError("internal: restriction produced -I")
    m = pattern.code.n_edges
    basis = gf2.row_basis([p.x | p.z << m for p in kept_rows])
    return state_from_generators([kept_rows[i] for i in basis])


def prepare_via_cluster(pattern: ClusterPattern, seed: int | None = 0, engine: str = "tableau",
                        outcome: int | None = None) -> ClusterResult:
    """Build the cluster, measure the vertex/face sites, apply Pauli fixups.

    ``outcome`` forces every random measurement onto that branch (e.g. +1 for
    the byproduct-free run). The returned state lives on the kept sites only,
    indexed by code edge.
    """
    rng = np.random.default_rng(seed)
    n = pattern.n_sites
    if engine == "tableau":
        state = Tableau(n)
    elif engine == "statevector":
        state = StateVector(n)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    for q in range(n):
        state.h(q)
    for a, b in pattern.grid_edges():
        state.cz(a, b)

    measured = pattern.measured()
    outcomes = {}
    for q in sorted(measured):
        outcomes[q] = state.measure_pauli(_single(n, q, measured[q]), rng, outcome).outcome

    code = pattern.code
    names = code.generator_names()
    predicted = {}
    for name, (kept, sites) in zip(names, _byproduct_relations(pattern)):
        sign = 1 if kept.phase == 0 else -1
        for q in sites:
            sign *= outcomes[q]
        predicted[name] = sign

    m = code.n_edges
    gens = code.generators()
    rows = [g.z | g.x << m for g in gens]
    rhs = [int(predicted[nm] == -1) for nm in names]
    sol = gf2.solve_system(rows, rhs)
    if sol is None:
        raise FixupUnsolvableError("no Pauli fixup restores every generator sign")
    fixups = PauliString(m, sol & ((1 << m) - 1), sol >> m)

    if engine == "tableau":
        reduced = _restrict_tableau(state, pattern, outcomes)
    else:
        reduced = state
        for q in sorted(measured, reverse=True):
            reduced = reduced.project_out(q, measured[q], outcomes[q])
        # remaining qubits are the kept sites in ascending site order
        order = sorted(range(m), key=lambda e: pattern.kept_sites[e])
        perm = [0] * m
        for pos, e in enumerate(order):
            perm[e] = pos
        amps = np.transpose(reduced.amplitudes.reshape((2,) * m), perm).reshape(-1)
        reduced = StateVector(m, amps, reduced.cap)

    for e in gf2.bits(fixups.x | fixups.z):
        letter = fixups.op(e)
        {"X": reduced.x, "Z": reduced.z, "Y": reduced.y}[letter](e)
    return ClusterResult(reduced, fixups, outcomes, predicted, syndrome(reduced, code))
