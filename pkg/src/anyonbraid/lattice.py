"""Planar codes: one qubit per edge, X-type star and Z-type boundary generators.

All ids at this level (edges, vertices, faces) are 1-based, matching how the
minimal six- and nine-qubit instances are usually labelled. Internally stars
and boundaries are stored as 0-based edge sets.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal, Sequence

from . import gf2
from .errors import InvalidLatticeError
from .stabilizer.pauli import PauliString
from .stabilizer.synthesis import anticommuting_pairs

__all__ = [
    "PlanarCode", "Loop", "LoopProduct", "ValidationReport",
    "square_lattice", "six_qubit_code", "nine_qubit_code",
    "star_operator", "boundary_operator", "validate", "loop_product",
    "closed_loops", "code_from_name", "load_code", "code_from_dict",
]

LoopKind = Literal["m", "e"]


@dataclass(frozen=True)
class PlanarCode:
    """Immutable planar code description.

    ``stars[v]`` and ``boundaries[f]`` are frozensets of 0-based edge indices.
    Label tuples are optional metadata; empty means "use defaults".
    """

    n_edges: int
    stars: tuple[frozenset[int], ...]
    boundaries: tuple[frozenset[int], ...]
    name: str = "custom"
    vertex_labels: tuple[str, ...] = field(default=(), compare=False)
    face_labels: tuple[str, ...] = field(default=(), compare=False)
    edge_labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.n_edges < 1:
            raise InvalidLatticeError("a code needs at least one edge")
        for kind, sets in (("star", self.stars), ("boundary", self.boundaries)):
            for i, s in enumerate(sets):
                if not s:
                    raise InvalidLatticeError(f"{kind} {i + 1} is empty")
                bad = [e for e in s if not 0 <= e < self.n_edges]
                if bad:
                    raise InvalidLatticeError(f"{kind} {i + 1} references unknown edge {bad[0] + 1}")

    @classmethod
    def from_sets(cls, n_edges: int, stars: Iterable[Iterable[int]], faces: Iterable[Iterable[int]],
                  name: str = "custom", **labels) -> "PlanarCode":
        """Build from 1-based edge lists."""
        to0 = lambda group: tuple(frozenset(e - 1 for e in s) for s in group)  # noqa: E731
        return cls(n_edges, to0(stars), to0(faces), name, **labels)

    @property
    def n_vertices(self) -> int:
        return len(self.stars)

    @property
    def n_faces(self) -> int:
        return len(self.boundaries)

    def star(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(e + 1 for e in self.stars[self._vertex(v)]))

    def boundary(self, f: int) -> tuple[int, ...]:
        return tuple(sorted(e + 1 for e in self.boundaries[self._face(f)]))

    def _vertex(self, v: int) -> int:
        if not 1 <= v <= self.n_vertices:
            raise InvalidLatticeError(f"unknown vertex {v} (code has {self.n_vertices})")
        return v - 1

    def _face(self, f: int) -> int:
        if not 1 <= f <= self.n_faces:
            raise InvalidLatticeError(f"unknown face {f} (code has {self.n_faces})")
        return f - 1

    def check_edge(self, e: int) -> int:
        """Validate a 1-based edge id and return the 0-based qubit index."""
        if not 1 <= e <= self.n_edges:
            raise InvalidLatticeError(f"unknown edge {e} (code has {self.n_edges})")
        return e - 1

    def vertices_of(self, e: int) -> list[int]:
        q = self.check_edge(e)
        return [v + 1 for v, s in enumerate(self.stars) if q in s]

    def faces_of(self, e: int) -> list[int]:
        q = self.check_edge(e)
        return [f + 1 for f, s in enumerate(self.boundaries) if q in s]

    def generator_names(self) -> list[str]:
        return [f"A{v + 1}" for v in range(self.n_vertices)] + [f"B{f + 1}" for f in range(self.n_faces)]

    def generators(self) -> list[PauliString]:
        """All A_v followed by all B_f."""
        return ([PauliString.x_string(self.n_edges, s) for s in self.stars]
                + [PauliString.z_string(self.n_edges, s) for s in self.boundaries])

    def named_generators(self) -> dict[str, PauliString]:
        return dict(zip(self.generator_names(), self.generators()))

    def to_dict(self) -> dict:
        out = {
            "n_edges": self.n_edges,
            "vertices": [list(self.star(v)) for v in range(1, self.n_vertices + 1)],
            "faces": [list(self.boundary(f)) for f in range(1, self.n_faces + 1)],
        }
        labels = {k: list(v) for k, v in (("vertices", self.vertex_labels), ("faces", self.face_labels),
                                         ("edges", self.edge_labels)) if v}
        if labels:
            out["labels"] = labels
        return out


@dataclass(frozen=True)
class Loop:
    """Ordered edge path (1-based). ``m`` loops carry X, ``e`` loops carry Z."""

    edges: tuple[int, ...]
    kind: LoopKind = "m"

    def __post_init__(self):
        if self.kind not in ("m", "e"):
            raise InvalidLatticeError(f"loop kind must be 'm' or 'e', got {self.kind!r}")
        object.__setattr__(self, "edges", tuple(int(e) for e in self.edges))

    def support(self) -> frozenset[int]:
        """Edges traversed an odd number of times."""
        odd: set[int] = set()
        for e in self.edges:
            odd ^= {e}
        return frozenset(odd)


@dataclass(frozen=True)
class LoopProduct:
    pauli: PauliString
    closed: bool
    violated: tuple[str, ...]
    decomposition: tuple[str, ...] | None

    def to_dict(self) -> dict:
        return {"pauli": self.pauli.to_sparse(), "closed": self.closed,
                "violated": list(self.violated),
                "decomposition": None if self.decomposition is None else list(self.decomposition)}


@dataclass(frozen=True)
class ValidationReport:
    n_edges: int
    n_vertices: int
    n_faces: int
    commuting: bool
    anticommuting_pairs: tuple[tuple[str, str], ...]
    rank: int
    logical_qubits: int

    @property
    def independent(self) -> bool:
        return self.rank == self.n_vertices + self.n_faces

    @property
    def valid(self) -> bool:
        return self.commuting

    def to_dict(self) -> dict:
        return {
            "valid": self.valid, "commuting": self.commuting,
            "anticommuting_pairs": [list(p) for p in self.anticommuting_pairs],
            "n_edges": self.n_edges, "n_vertices": self.n_vertices, "n_faces": self.n_faces,
            "generators": self.n_vertices + self.n_faces, "rank": self.rank,
            "independent": self.independent, "logical_qubits": self.logical_qubits,
        }


# builders ---------------------------------------------------------------

def square_lattice(rows: int, cols: int, boundary: str = "planar") -> PlanarCode:
    """Square-lattice code with ``rows x cols`` vertices and ``2*rows*cols`` edges.

    Edge ``h(i,j)`` runs right from vertex (i,j) and ``v(i,j)`` runs down;
    they get 1-based ids ``2*(i*cols+j)+1`` and ``+2``. On a torus everything
    wraps. On a planar patch the edges leaving the right and bottom border end
    on a shared outer vertex that carries no generator, so stars are truncated
    on the top/left border and faces on the bottom/right border. The planar
    patch has independent generators and no logical qubits.
    """
    if rows < 2 or cols < 2:
        raise InvalidLatticeError(f"square lattice needs rows, cols >= 2, got {rows}x{cols}")
    if boundary not in ("planar", "torus"):
        raise InvalidLatticeError(f"boundary must be 'planar' or 'torus', got {boundary!r}")
    torus = boundary == "torus"
    h = lambda i, j: 2 * (i * cols + j)  # noqa: E731
    v = lambda i, j: 2 * (i * cols + j) + 1  # noqa: E731
    stars, faces = [], []
    for i in range(rows):
        for j in range(cols):
            star = {h(i, j), v(i, j)}
            face = {h(i, j), v(i, j)}
            if torus:
                star |= {h(i, (j - 1) % cols), v((i - 1) % rows, j)}
                face |= {v(i, (j + 1) % cols), h((i + 1) % rows, j)}
            else:
                if j > 0:
                    star.add(h(i, j - 1))
                if i > 0:
                    star.add(v(i - 1, j))
                if j + 1 < cols:
                    face.add(v(i, j + 1))
                if i + 1 < rows:
                    face.add(h(i + 1, j))
            stars.append(frozenset(star))
            faces.append(frozenset(face))
    assert all(len(s) >= 2 for s in stars + faces)
    coords = [(i, j) for i in range(rows) for j in range(cols)]
    edge_labels = tuple(lab for i, j in coords for lab in (f"h({i},{j})", f"v({i},{j})"))
    return PlanarCode(
        2 * rows * cols, tuple(stars), tuple(faces), f"square:{rows}x{cols}:{boundary}",
        vertex_labels=tuple(f"vertex({i},{j})" for i, j in coords),
        face_labels=tuple(f"face({i},{j})" for i, j in coords),
        edge_labels=edge_labels,
    )


def six_qubit_code() -> PlanarCode:
    """Smallest code supporting a braid: A1=X1X2X3, A2=X3X4X5X6, B1..B4."""
    return PlanarCode.from_sets(
        6,
        [[1, 2, 3], [3, 4, 5, 6]],
        [[1, 3, 4], [2, 3, 5], [4, 6], [5, 6]],
        name="six",
    )


def nine_qubit_code() -> PlanarCode:
    """Six-qubit code extended by one vertex (A3 = X6X7X8X9) and two faces.

    Loops 6-5-3-4 and 9-8-5-3-4-7 both enclose the vertex between edges
    3, 4, 5, 6; loop 9-8-6-7 encloses none.
    """
    return PlanarCode.from_sets(
        9,
        [[1, 2, 3], [3, 4, 5, 6], [6, 7, 8, 9]],
        [[1, 3, 4], [2, 3, 5], [4, 6, 7], [5, 6, 8], [7, 9], [8, 9]],
        name="nine",
    )


# operators --------------------------------------------------------------

def star_operator(code: PlanarCode, v: int) -> PauliString:
    return PauliString.x_string(code.n_edges, code.stars[code._vertex(v)])


def boundary_operator(code: PlanarCode, f: int) -> PauliString:
    return PauliString.z_string(code.n_edges, code.boundaries[code._face(f)])


def validate(code: PlanarCode) -> ValidationReport:
    gens = code.generators()
    names = code.generator_names()
    pairs = tuple((names[i], names[j]) for i, j in anticommuting_pairs(gens))
    n = code.n_edges
    rank = gf2.rank(g.x | g.z << n for g in gens)
    return ValidationReport(n, code.n_vertices, code.n_faces, not pairs, pairs, rank, n - rank)


def loop_product(code: PlanarCode, loop: Loop) -> LoopProduct:
    """Pauli carried by ``loop``, whether it is closed, and its generator expansion."""
    qubits = [code.check_edge(e) for e in loop.support()]
    n = code.n_edges
    if loop.kind == "m":
        pauli = PauliString.x_string(n, qubits)
    else:
        pauli = PauliString.z_string(n, qubits)
    gens = code.generators()
    names = code.generator_names()
    violated = tuple(name for name, g in zip(names, gens) if not pauli.commutes(g))
    decomposition = None
    if not violated:
        combo = gf2.solve([g.x | g.z << n for g in gens], pauli.x | pauli.z << n)
        if combo is not None:
            decomposition = tuple(names[i] for i in gf2.bits(combo))
    return LoopProduct(pauli, not violated, violated, decomposition)


def _transport_graph(code: PlanarCode, kind: LoopKind) -> tuple[int, list[tuple[int, int]]]:
    """Endpoints of every edge in the graph the quasiparticle hops on.

    Node ids are 0-based sites (faces for m, vertices for e); the extra node
    ``len(sites)`` is the generator-free outer site.
    """
    sites = code.boundaries if kind == "m" else code.stars
    outer = len(sites)
    ends: list[list[int]] = [[] for _ in range(code.n_edges)]
    for s, edges in enumerate(sites):
        for e in edges:
            ends[e].append(s)
    graph = []
    for e, nodes in enumerate(ends):
        if len(nodes) > 2:
            raise InvalidLatticeError(f"edge {e + 1} borders {len(nodes)} sites; not a planar code")
        nodes = nodes + [outer] * (2 - len(nodes))
        graph.append((nodes[0], nodes[1]))
    return outer + 1, graph


def closed_loops(code: PlanarCode, kind: LoopKind = "m", max_length: int = 6) -> Iterator[Loop]:
    """Every simple cycle of length <= ``max_length`` in the hopping graph.

    m-loops hop between faces across edges, e-loops between vertices along
    edges; both may pass through the outer site. Each cycle is produced once.
    """
    n_nodes, graph = _transport_graph(code, kind)
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for e, (a, b) in enumerate(graph):
        if a == b:
            continue
        adjacency[a].append((b, e))
        adjacency[b].append((a, e))
    seen: set[frozenset[int]] = set()
    for e, (a, b) in enumerate(graph):
        if a == b and max_length >= 1:
            seen.add(frozenset([e]))
            yield Loop((e + 1,), kind)
    for start in range(n_nodes):
        path_edges: list[int] = []
        on_path = {start}

        def extend(node: int) -> Iterator[Loop]:
            for nxt, e in adjacency[node]:
                if e in path_edges:
                    continue
                if nxt == start:
                    cycle = path_edges + [e]
                    key = frozenset(cycle)
                    if key not in seen:
                        seen.add(key)
                        yield Loop(tuple(x + 1 for x in cycle), kind)
                    continue
                if nxt < start or nxt in on_path or len(path_edges) + 2 > max_length:
                    continue
                path_edges.append(e)
                on_path.add(nxt)
                yield from extend(nxt)
                on_path.remove(nxt)
                path_edges.pop()

        yield from extend(start)


# file and name I/O ------------------------------------------------------

_SQUARE = re.compile(r"square:(\d+)x(\d+)(?::(planar|torus))?$")


def code_from_name(name: str) -> PlanarCode:
    """Builtins: ``six``, ``nine``, ``square:RxC:planar`` or ``square:RxC:torus``."""
    if name == "six":
        return six_qubit_code()
    if name == "nine":
        return nine_qubit_code()
    m = _SQUARE.match(name)
    if m:
        return square_lattice(int(m.group(1)), int(m.group(2)), m.group(3) or "planar")
    raise InvalidLatticeError(f"unknown builtin code {name!r}")


def code_from_dict(data: dict, name: str = "custom") -> PlanarCode:
    try:
        n_edges = int(data["n_edges"])
        stars = [[int(e) for e in s] for s in data["vertices"]]
        faces = [[int(e) for e in s] for s in data["faces"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidLatticeError(f"malformed lattice description: {exc!r}") from None
    labels = data.get("labels") or {}
    return PlanarCode.from_sets(
        n_edges, stars, faces, data.get("name", name),
        vertex_labels=tuple(labels.get("vertices", ())),
        face_labels=tuple(labels.get("faces", ())),
        edge_labels=tuple(labels.get("edges", ())),
    )


def load_code(ref: str | Path) -> PlanarCode:
    """Resolve a builtin name or read a JSON lattice file."""
    ref_s = str(ref)
    if ref_s in ("six", "nine") or ref_s.startswith("square:"):
        return code_from_name(ref_s)
    path = Path(ref_s)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InvalidLatticeError(f"no builtin or file named {ref_s!r}") from None
    except json.JSONDecodeError as exc:
        raise InvalidLatticeError(f"{ref_s}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InvalidLatticeError(f"{ref_s}: lattice file must be a JSON object")
    return code_from_dict(data, name=path.stem)
