import itertools

import numpy as np
import pytest

from anyonbraid.errors import InvalidLatticeError
from anyonbraid.lattice import square_lattice
from anyonbraid.protocols import build_cluster_pattern, cluster_stabilizers, prepare_via_cluster, syndrome


def test_pattern_counts():
    p = build_cluster_pattern(2, 2)
    assert len(p.kept_sites) == square_lattice(2, 2).n_edges == 8
    p = build_cluster_pattern(3, 3)
    code = square_lattice(3, 3)
    assert len(p.face_sites) == code.n_faces and len(p.vertex_sites) == code.n_vertices
    sites = set(p.kept_sites) | set(p.vertex_sites) | set(p.face_sites)
    assert len(sites) == p.n_sites == len(p.kept_sites) + len(p.vertex_sites) + len(p.face_sites)
    with pytest.raises(InvalidLatticeError):
        build_cluster_pattern(1, 2)


def test_kept_sites_reproduce_code_incidence():
    # a face-site's kept neighbours are its boundary edges, a vertex-site's are its star
    for rows, cols in ((2, 2), (3, 4)):
        p = build_cluster_pattern(rows, cols)
        edge_of = {q: e for e, q in enumerate(p.kept_sites)}
        for sites, sets in ((p.face_sites, p.code.boundaries), (p.vertex_sites, p.code.stars)):
            for site, expected in zip(sites, sets):
                got = {edge_of[q] for q in p.neighbours(site) if q in edge_of}
                assert got == set(expected)


def test_cluster_stabilizers_commute():
    stabs = cluster_stabilizers(build_cluster_pattern(3, 3))
    assert all(a.commutes(b) for a, b in itertools.combinations(stabs, 2))


@pytest.mark.parametrize("shape", [(2, 2), (3, 3), (2, 4)])
def test_all_plus_after_fixups(shape):
    p = build_cluster_pattern(*shape)
    for seed in range(20):
        res = prepare_via_cluster(p, seed)
        assert set(res.syndrome.values()) == {1}
        assert res.syndrome == syndrome(res.state, p.code)


def test_forced_plus_outcomes_need_no_fixup():
    for shape in ((2, 2), (3, 3)):
        res = prepare_via_cluster(build_cluster_pattern(*shape), 0, outcome=1)
        assert res.fixups.x == 0 and res.fixups.z == 0
        assert set(res.outcomes.values()) == {1}


def test_predicted_signs_match_uncorrected_state():
    p = build_cluster_pattern(3, 3)
    for seed in range(10):
        res = prepare_via_cluster(p, seed)
        raw = res.state.copy()
        for e in range(p.code.n_edges):
            letter = res.fixups.op(e)
            if letter != "I":
                getattr(raw, letter.lower())(e)
        assert syndrome(raw, p.code) == res.predicted_signs


def test_outcome_independence():
    p = build_cluster_pattern(2, 2)
    states = [prepare_via_cluster(p, seed).state for seed in range(100)]
    assert all(states[0].same_state(s) for s in states[1:])
    outcomes = {tuple(prepare_via_cluster(p, seed).outcomes.values()) for seed in range(100)}
    assert len(outcomes) > 10


def test_statevector_route_agrees():
    p = build_cluster_pattern(2, 2)
    for seed in range(5):
        a = prepare_via_cluster(p, seed, engine="tableau")
        b = prepare_via_cluster(p, seed, engine="statevector")
        assert a.to_dict() == b.to_dict()
        for g in p.code.generators():
            assert abs(b.state.expectation(g) - 1) < 1e-10
