import itertools

import numpy as np
from hypothesis import given, strategies as st

from anyonbraid import gf2


def brute_rank(rows, width):
    """Rank by enumerating the span (independent oracle for tiny inputs)."""
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


def test_bits_and_mask_roundtrip():
    assert gf2.bits(0b101001) == [0, 3, 5]
    assert gf2.mask([0, 3, 5]) == 0b101001
    assert gf2.mask([]) == 0


def test_rank_of_identity_and_dependent_rows():
    assert gf2.rank([1, 2, 4, 8]) == 4
    assert gf2.rank([0b011, 0b110, 0b101]) == 2
    assert gf2.rank([]) == 0


@given(st.lists(st.integers(0, 2**6 - 1), max_size=8))
def test_rank_matches_span_size(rows):
    assert gf2.rank(rows) == brute_rank(rows, 6)


@given(st.lists(st.integers(0, 2**7 - 1), max_size=9))
def test_row_basis_is_independent_and_spanning(rows):
    idx = gf2.row_basis(rows)
    assert gf2.rank([rows[i] for i in idx]) == len(idx) == gf2.rank(rows)
    assert idx == sorted(idx)


@given(st.lists(st.integers(0, 2**6 - 1), max_size=7), st.integers(0, 2**6 - 1))
def test_solve_returns_minimal_subset(rows, target):
    combo = gf2.solve(rows, target)
    # exhaustive oracle: smallest subset, then lexicographically smallest
    best = None
    for k in range(len(rows) + 1):
        for subset in itertools.combinations(range(len(rows)), k):
            acc = 0
            for i in subset:
                acc ^= rows[i]
            if acc == target:
                best = subset
                break
        if best is not None:
            break
    if best is None:
        assert combo is None
    else:
        assert tuple(gf2.bits(combo)) == best


def test_eliminator_express_and_kernel():
    e = gf2.Eliminator()
    assert e.insert(0b011)
    assert e.insert(0b110)
    assert not e.insert(0b101)
    assert e.kernel == [0b111]
    combo = e.express(0b101)
    assert combo is not None
    acc = 0
    for i in gf2.bits(combo):
        acc ^= [0b011, 0b110, 0b101][i]
    assert acc == 0b101
    assert e.express(0b1000) is None


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, 2**n - 1), min_size=1, max_size=10), st.integers(0, 2**n - 1))))
def test_solve_system_satisfies_equations(case):
    n, rows, secret = case
    rhs = [(r & secret).bit_count() % 2 for r in rows]
    v = gf2.solve_system(rows, rhs)
    assert v is not None
    assert [(r & v).bit_count() % 2 for r in rows] == rhs


def test_solve_system_detects_inconsistency():
    assert gf2.solve_system([0b1, 0b1], [0, 1]) is None
    assert gf2.solve_system([0b11, 0b01, 0b10], [1, 1, 1]) is None


def test_solve_system_against_numpy_bruteforce():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        rows = [int(r) for r in rng.integers(0, 2**n, size=int(rng.integers(1, 7)))]
        rhs = [int(b) for b in rng.integers(0, 2, size=len(rows))]
        exists = any(all((r & v).bit_count() % 2 == b for r, b in zip(rows, rhs)) for v in range(2**n))
        got = gf2.solve_system(rows, rhs)
        assert (got is not None) == exists
