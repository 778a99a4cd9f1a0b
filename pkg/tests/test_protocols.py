import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anyonbraid import gf2
from anyonbraid.errors import InvalidLatticeError, ProtocolError
from anyonbraid.lattice import Loop, loop_product, nine_qubit_code, six_qubit_code, square_lattice, star_operator
from anyonbraid.protocols import (
    DegenerateCodeError, braid, create_m_pair, e_superposition, fuse, prepare_ground_state, ramsey_circuit,
    ramsey_experiment, run_on_engines, self_statistics_circuit, self_statistics_experiment, syndrome,
)
from anyonbraid.stabilizer import PauliString, state_from_generators
from anyonbraid.statevector import StateVector, cross_check, sv_overlap

SIX, NINE = six_qubit_code(), nine_qubit_code()
SIX_LOOP = Loop((6, 5, 3, 4))


def all_plus(code):
    return {name: 1 for name in code.generator_names()}


@pytest.mark.parametrize("engine", ["tableau", "statevector"])
def test_ground_states(engine):
    for code in (SIX, NINE):
        assert syndrome(prepare_ground_state(code, engine), code) == all_plus(code)


def test_degenerate_code_rejected():
    with pytest.raises(DegenerateCodeError, match="2 logical"):
        prepare_ground_state(square_lattice(3, 3, "torus"))


def test_prepared_states_are_independent_copies():
    a = prepare_ground_state(SIX)
    a.z(2)
    assert syndrome(prepare_ground_state(SIX), SIX) == all_plus(SIX)


def test_e_superposition():
    s = e_superposition(prepare_ground_state(SIX), 3)
    syn = syndrome(s, SIX)
    assert syn["A1"] == syn["A2"] == 0
    assert all(syn[f"B{f}"] == 1 for f in range(1, 5))
    phi = prepare_ground_state(SIX, "statevector")
    psi = e_superposition(phi.copy(), 3)
    for branch in (phi, phi.copy().z(2)):
        assert abs(abs(sv_overlap(branch, psi)) - 2 ** -0.5) < 1e-10
    with pytest.raises(InvalidLatticeError):
        e_superposition(prepare_ground_state(SIX), 7)


def test_create_m_pair():
    s = create_m_pair(prepare_ground_state(SIX), 4)
    expected = dict(all_plus(SIX), B1=-1, B3=-1)
    assert syndrome(s, SIX) == expected
    create_m_pair(s, 4)
    assert syndrome(s, SIX) == all_plus(SIX)


def _torus_eigenstate(code):
    """A joint +1 eigenstate of a torus code, pinned by two logical Z strings."""
    n = code.n_edges
    gens = code.generators()
    gens = [gens[i] for i in gf2.row_basis([g.x | g.z << n for g in gens])]
    rows, cols = 5, 5
    gens.append(PauliString.z_string(n, [2 * j for j in range(cols)]))
    gens.append(PauliString.z_string(n, [2 * i * cols + 1 for i in range(rows)]))
    return state_from_generators(gens)


def test_m_pair_on_torus_flips_two_faces():
    code = square_lattice(5, 5, "torus")
    ground = _torus_eigenstate(code)
    assert set(syndrome(ground, code).values()) == {1}
    for e in range(1, code.n_edges + 1):
        syn = syndrome(create_m_pair(ground.copy(), e), code)
        assert sum(1 for k, v in syn.items() if v == -1 and k.startswith("B")) == 2
        assert all(v == 1 for k, v in syn.items() if k.startswith("A"))


def test_empty_braid_is_identity():
    s = prepare_ground_state(SIX)
    before = s.copy()
    braid(s, Loop(()))
    assert s.same_state(before)


def test_fuse_braided_and_unbraided():
    s = prepare_ground_state(SIX)
    e_superposition(s, 3)
    create_m_pair(s, 4)
    braid(s, SIX_LOOP)
    fuse(s, 3, 4)
    assert syndrome(s, SIX) == all_plus(SIX)
    control = prepare_ground_state(SIX)
    e_superposition(control, 3)
    create_m_pair(control, 4)
    fuse(control, 3, 4)
    assert syndrome(control, SIX) == dict(all_plus(SIX), A1=-1, A2=-1)


def test_fuse_on_statevector_returns_to_ground_state():
    phi = prepare_ground_state(SIX, "statevector")
    s = phi.copy()
    e_superposition(s, 3)
    create_m_pair(s, 4)
    braid(s, SIX_LOOP)
    fuse(s, 3, 4)
    assert abs(abs(sv_overlap(phi, s)) - 1) < 1e-10


def test_interferometer_operator_identity():
    # X(m) * loop * X(m) acts as the loop product, which for the six-qubit loop is A2
    n = SIX.n_edges
    acc = PauliString.single(n, 3, "X")
    for e in SIX_LOOP.edges:
        acc = acc * PauliString.single(n, e - 1, "X")
    acc = acc * PauliString.single(n, 3, "X")
    assert acc == loop_product(SIX, SIX_LOOP).pauli == star_operator(SIX, 2)


@pytest.mark.parametrize("code,loop,phase", [
    (SIX, (6, 5, 3, 4), -1),
    (NINE, (6, 5, 3, 4), -1),
    (NINE, (9, 8, 5, 3, 4, 7), -1),
    (NINE, (9, 8, 6, 7), 1),
])
@pytest.mark.parametrize("engine", ["tableau", "statevector"])
def test_ramsey_examples(code, loop, phase, engine):
    r = ramsey_experiment(code, 3, 4, loop, engine=engine)
    assert r.braiding_phase == phase
    assert r.prepared_check == all_plus(code)
    assert set(r.final_syndrome) == set(code.generator_names())


def test_ramsey_errors():
    with pytest.raises(ProtocolError, match="unclosed loop"):
        ramsey_experiment(SIX, 3, 4, (6, 5))
    with pytest.raises(ProtocolError):
        ramsey_experiment(SIX, 3, 4, Loop((4, 6), "e"))
    with pytest.raises(InvalidLatticeError):
        ramsey_experiment(SIX, 3, 40, (6, 5, 3, 4))
    # an edge in no star cannot create an e-pair
    from anyonbraid.lattice import PlanarCode
    code = PlanarCode.from_sets(3, [[1, 2]], [[1, 2], [3]])
    with pytest.raises(ProtocolError, match="no vertex"):
        ramsey_experiment(code, 3, 1, ())


def test_unexpected_syndrome_is_reported(monkeypatch):
    from anyonbraid.protocols import braiding

    monkeypatch.setattr(braiding, "_readout", lambda state, code, rng: dict(all_plus(code), B1=-1))
    with pytest.raises(ProtocolError, match="unexpected final syndrome"):
        ramsey_experiment(SIX, 3, 4, SIX_LOOP)


def test_trace_records_every_step():
    r = ramsey_experiment(SIX, 3, 4, SIX_LOOP, trace=True)
    assert [s["op"] for s in r.steps] == ["S", "X", "X", "X", "X", "X", "X", "S"]
    assert r.steps[1]["syndrome"]["B1"] == -1 and r.steps[1]["syndrome"]["A1"] == 0
    assert "syndrome" not in ramsey_experiment(SIX, 3, 4, SIX_LOOP).steps[0]


def test_self_statistics_examples():
    assert self_statistics_experiment(SIX, "e", 3, Loop((4, 6), "e")).braiding_phase == 1
    code = square_lattice(4, 4, "planar")
    face_loop = Loop(code.star(6), "m")
    assert self_statistics_experiment(code, "m", face_loop.edges[0], face_loop).braiding_phase == 1
    with pytest.raises(ProtocolError):
        self_statistics_experiment(SIX, "x", 3, ())
    with pytest.raises(ProtocolError, match="unclosed"):
        self_statistics_experiment(SIX, "e", 3, Loop((4,), "e"))


def test_reports_identical_on_both_engines():
    for fn, args in ((ramsey_experiment, (NINE, 3, 4, (9, 8, 5, 3, 4, 7))),
                     (self_statistics_experiment, (SIX, "m", 4, (6, 5, 3, 4))),
                     (self_statistics_experiment, (SIX, "e", 3, Loop((4, 6), "e")))):
        a = fn(*args, engine="tableau", trace=True).comparable()
        b = fn(*args, engine="statevector", trace=True).comparable()
        assert a == b
        both = run_on_engines(fn, *args, engine="both")
        assert both.engine == "both" and both.agreement is True


def test_protocol_circuits_cross_check():
    assert cross_check(ramsey_circuit(NINE, 3, 4, (9, 8, 6, 7)), [0, 1]).passed
    assert cross_check(self_statistics_circuit(SIX, "m", 4, (6, 5, 3, 4)), [0]).passed


def test_syndrome_size_mismatch():
    with pytest.raises(ProtocolError):
        syndrome(prepare_ground_state(SIX), NINE)


def test_report_serialisation():
    d = ramsey_experiment(SIX, 3, 4, SIX_LOOP, seed=7).to_dict()
    assert d["seed"] == 7 and d["engine"] == "tableau" and d["braiding_phase"] in (1, -1)
    assert d["parameters"] == {"e_edge": 3, "m_edge": 4, "loop": [6, 5, 3, 4]}


def _loop_from_support(mask):
    return Loop(tuple(q + 1 for q in gf2.bits(mask)))


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_path_independence_on_5x5(seed):
    rng = np.random.default_rng(seed)
    code = square_lattice(5, 5, "planar")
    e_edge = int(rng.integers(1, code.n_edges + 1))
    e_vertices = {v - 1 for v in code.vertices_of(e_edge)}
    base = 0
    for v in rng.choice(code.n_vertices, int(rng.integers(1, 4)), replace=False):
        base ^= gf2.mask(code.stars[int(v)])
    others = [v for v in range(code.n_vertices) if v not in e_vertices]
    deform = 0
    for v in rng.choice(others, int(rng.integers(1, 5)), replace=False):
        deform ^= gf2.mask(code.stars[int(v)])
    a, b = _loop_from_support(base), _loop_from_support(base ^ deform)
    if not a.edges or not b.edges:
        return
    pa = ramsey_experiment(code, e_edge, a.edges[0], a).braiding_phase
    pb = ramsey_experiment(code, e_edge, b.edges[0], b).braiding_phase
    assert pa == pb
