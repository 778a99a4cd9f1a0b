"""Creation, transport and fusion of e/m quasiparticles and the Ramsey braid test.

Edge arguments are 1-based. Every operation mutates ``state`` in place and
returns it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import InvalidLatticeError, ProtocolError
from ..lattice import Loop, PlanarCode, loop_product
from ..stabilizer.circuit import Circuit
from .engines import (
    ENGINES, State, as_eigenvalue, ground_state_circuit, prepare_ground_state, syndrome,
)

__all__ = [
    "ProtocolReport", "e_superposition", "create_m_pair", "braid", "fuse",
    "ramsey_experiment", "self_statistics_experiment", "run_on_engines",
    "ramsey_circuit", "self_statistics_circuit",
]


def _qubit(state: State, edge: int) -> int:
    if not 1 <= edge <= state.n:
        raise InvalidLatticeError(f"unknown edge {edge} (state has {state.n} qubits)")
    return edge - 1


class _Log:
    """Gate log with optional per-step syndrome trace."""

    def __init__(self, code: PlanarCode | None, trace: bool):
        self.code = code
        self.trace = trace and code is not None
        self.steps: list[dict] = []

    def record(self, state: State, stage: str, op: str, edge: int) -> None:
        step = {"stage": stage, "op": op, "edge": edge}
        if self.trace:
            step["syndrome"] = syndrome(state, self.code)
        self.steps.append(step)


def _apply(state: State, op: str, edge: int, log: _Log | None, stage: str) -> None:
    q = _qubit(state, edge)
    if op == "SQRTX":
        state.h(q).s(q).h(q)
    else:
        {"S": state.s, "X": state.x, "Z": state.z}[op](q)
    if log is not None:
        log.record(state, stage, op, edge)


def e_superposition(state: State, edge: int, log: _Log | None = None) -> State:
    """sqrt(Z) on ``edge``: equal-weight superposition of no e-pair and an e-pair."""
    _apply(state, "S", edge, log, "e-superposition")
    return state


def create_m_pair(state: State, edge: int, log: _Log | None = None) -> State:
    """X on ``edge`` flips the faces on both sides of it."""
    _apply(state, "X", edge, log, "create-m")
    return state


def braid(state: State, loop: Loop, log: _Log | None = None) -> State:
    """Transport along ``loop``: X per edge for m-loops, Z per edge for e-loops."""
    op = "X" if loop.kind == "m" else "Z"
    for e in loop.edges:
        _apply(state, op, e, log, "braid")
    return state


def fuse(state: State, e_edge: int, m_edge: int, log: _Log | None = None) -> State:
    """Annihilate the m-pair with X, then close the interferometer with sqrt(Z)."""
    _apply(state, "X", m_edge, log, "fuse-m")
    _apply(state, "S", e_edge, log, "close")
    return state


@dataclass
class ProtocolReport:
    experiment: str
    code: str
    engine: str
    seed: int
    n_qubits: int
    parameters: dict
    prepared_check: dict[str, int]
    braiding_phase: int
    final_syndrome: dict[str, int]
    steps: list[dict] = field(default_factory=list)
    agreement: bool | None = None

    def comparable(self) -> dict:
        d = self.to_dict()
        d.pop("engine")
        d.pop("agreement")
        return d

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "code": self.code,
            "engine": self.engine,
            "seed": self.seed,
            "n_qubits": self.n_qubits,
            "parameters": self.parameters,
            "prepared_check": self.prepared_check,
            "braiding_phase": self.braiding_phase,
            "final_syndrome": self.final_syndrome,
            "steps": self.steps,
            "agreement": self.agreement,
        }


def _readout(state: State, code: PlanarCode, rng) -> dict[str, int]:
    """Measure every generator (random outcomes only for indeterminate ones)."""
    names, gens = code.generator_names(), code.generators()
    out: dict[str, int] = {}
    start = 0
    while start < len(gens):
        # deterministic readouts leave the state alone, so batch up to the first random one
        values = [as_eigenvalue(v) for v in state.expectations(gens[start:])]
        for offset, v in enumerate(values):
            i = start + offset
            if v == 0:
                out[names[i]] = state.measure_pauli(gens[i], rng).outcome
                start = i + 1
                break
            out[names[i]] = v
        else:
            start = len(gens)
    return out


def _classify(final: dict[str, int], excited: set[str]) -> int:
    if all(v == 1 for v in final.values()):
        return -1
    if all(v == (-1 if k in excited else 1) for k, v in final.items()):
        return 1
    flipped = sorted(k for k, v in final.items() if v != 1)
    raise ProtocolError(f"unexpected final syndrome: {flipped} read -1")


def _closed(code: PlanarCode, loop: Loop) -> None:
    lp = loop_product(code, loop)
    if not lp.closed:
        raise ProtocolError(f"unclosed loop {list(loop.edges)}: anticommutes with {', '.join(lp.violated)}")


def _as_loop(loop, kind: str) -> Loop:
    if isinstance(loop, Loop):
        if loop.kind != kind:
            raise ProtocolError(f"expected an {kind}-loop, got an {loop.kind}-loop")
        return loop
    return Loop(tuple(loop), kind)


def _interferometer(code: PlanarCode, engine: str, seed: int, trace: bool, create_op: str,
                    create_edge: int, moves: Sequence[tuple[str, int, str]]) -> tuple[State, list[dict], dict, dict]:
    rng = np.random.default_rng(seed)
    state = prepare_ground_state(code, engine)
    prepared = syndrome(state, code)
    log = _Log(code, trace)
    _apply(state, create_op, create_edge, log, "open")
    for op, edge, stage in moves:
        _apply(state, op, edge, log, stage)
    _apply(state, create_op, create_edge, log, "close")
    final = _readout(state, code, rng)
    return state, log.steps, prepared, final


def _ramsey_plan(code: PlanarCode, e_edge: int, m_edge: int, loop):
    loop = _as_loop(loop, "m")
    code.check_edge(e_edge)
    code.check_edge(m_edge)
    _closed(code, loop)
    e_vertices = code.vertices_of(e_edge)
    if not e_vertices:
        raise ProtocolError(f"edge {e_edge} touches no vertex generator; it creates no e-particle")
    if not code.faces_of(m_edge):
        raise ProtocolError(f"edge {m_edge} touches no face generator; it creates no m-particle")
    moves = ([("X", m_edge, "create-m")] + [("X", e, "braid") for e in loop.edges]
             + [("X", m_edge, "fuse-m")])
    params = {"e_edge": e_edge, "m_edge": m_edge, "loop": list(loop.edges)}
    return "S", e_edge, moves, {f"A{v}" for v in e_vertices}, params


def _self_plan(code: PlanarCode, species: str, pair_edge: int, loop):
    if species not in ("e", "m"):
        raise ProtocolError(f"species must be 'e' or 'm', got {species!r}")
    loop = _as_loop(loop, species)
    code.check_edge(pair_edge)
    _closed(code, loop)
    if species == "e":
        sites = {f"A{v}" for v in code.vertices_of(pair_edge)}
        create, move = "S", "Z"
    else:
        sites = {f"B{f}" for f in code.faces_of(pair_edge)}
        create, move = "SQRTX", "X"
    if not sites:
        raise ProtocolError(f"edge {pair_edge} creates no {species}-particle")
    moves = [(move, e, "braid") for e in loop.edges]
    params = {"species": species, "pair_edge": pair_edge, "loop": list(loop.edges)}
    return create, pair_edge, moves, sites, params


def _run_plan(code: PlanarCode, experiment: str, plan, engine: str, seed: int, trace: bool) -> ProtocolReport:
    create, edge, moves, excited, params = plan
    _, steps, prepared, final = _interferometer(code, engine, seed, trace, create, edge, moves)
    return ProtocolReport(experiment, code.name, engine, seed, code.n_edges, params,
                          prepared, _classify(final, excited), final, steps)


def _plan_circuit(code: PlanarCode, plan) -> Circuit:
    """Preparation, interferometer and generator readout as one circuit."""
    create, edge, moves, _, _ = plan
    c = Circuit(code.n_edges, list(ground_state_circuit(code).ops))
    ops = [(create, edge)] + [(op, e) for op, e, _ in moves] + [(create, edge)]
    for op, e in ops:
        if op == "SQRTX":
            c.append("H", e - 1).append("S", e - 1).append("H", e - 1)
        else:
            c.append(op, e - 1)
    for g in code.generators():
        c.measure(g)
    return c


def ramsey_experiment(code: PlanarCode, e_edge: int, m_edge: int, loop, engine: str = "tableau",
                      seed: int = 0, trace: bool = False) -> ProtocolReport:
    """Interfere the ground state with the e-pair branch around an m-braid.

    braiding_phase is -1 when the final state is the ground state (the braid
    imprinted a pi phase on the e-pair branch) and +1 when it is the e-pair
    state.
    """
    return _run_plan(code, "ramsey", _ramsey_plan(code, e_edge, m_edge, loop), engine, seed, trace)


def self_statistics_experiment(code: PlanarCode, species: str, pair_edge: int, loop,
                               engine: str = "tableau", seed: int = 0, trace: bool = False) -> ProtocolReport:
    """Same interferometer, but the loop carries the same species as the pair.

    The e version opens with sqrt(Z) and moves along a closed Z-string; the m
    version opens with sqrt(X) and moves along a closed X-string.
    """
    plan = _self_plan(code, species, pair_edge, loop)
    return _run_plan(code, f"self_statistics_{species}", plan, engine, seed, trace)


def ramsey_circuit(code: PlanarCode, e_edge: int, m_edge: int, loop) -> Circuit:
    return _plan_circuit(code, _ramsey_plan(code, e_edge, m_edge, loop))


def self_statistics_circuit(code: PlanarCode, species: str, pair_edge: int, loop) -> Circuit:
    return _plan_circuit(code, _self_plan(code, species, pair_edge, loop))


def run_on_engines(fn, *args, engine: str = "tableau", **kwargs) -> ProtocolReport:
    """Run a report-producing protocol on one engine, or on both and compare.

    With ``engine="both"`` the tableau report is returned with ``engine`` set
    to "both" and ``agreement`` recording whether the state-vector run
    produced an identical report.
    """
    if engine != "both":
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}")
        return fn(*args, engine=engine, **kwargs)
    a = fn(*args, engine="tableau", **kwargs)
    b = fn(*args, engine="statevector", **kwargs)
    a.engine = "both"
    a.agreement = a.comparable() == b.comparable()
    return a
