import pytest
from hypothesis import given, settings, strategies as st

from neighborly.incmat import IncidenceMatrix, simplex, transpose
from neighborly.lattice import build_poset, closure, dump_poset, is_k_simple, is_k_simplicial

matrices = st.integers(2, 5).flatmap(
    lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=1, max_size=6).map(
        lambda rows: IncidenceMatrix(n, rows)
    )
)


def test_closure_simplex_pairs():
    S = simplex(4)
    assert closure(S, {0, 1}) == {0, 1}
    assert closure(S, ()) == frozenset()


def test_closure_full_when_unsupported():
    S = simplex(3)
    assert closure(S, {0, 1, 2, 3}) == {0, 1, 2, 3}


def test_closure_rejects_bad_index():
    with pytest.raises(ValueError):
        closure(simplex(3), {7})


def test_simplex_poset():
    P = build_poset(simplex(4))
    assert len(P.faces) == 2**5
    assert P.dim == 4
    assert P.f_vector() == (5, 10, 10, 5)
    for v, _, t in P.faces:
        assert t == v.bit_count() - 1


def test_square_poset():
    M = IncidenceMatrix.from_lists(
        [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]]
    )
    P = build_poset(M)
    assert P.dim == 2
    assert P.f_vector() == (4, 4)
    assert is_k_simplicial(P, 1)
    assert is_k_simple(P, 1)


def test_simplex_simplicial_and_simple():
    P = build_poset(simplex(5))
    for k in range(5):
        assert is_k_simplicial(P, k)
        assert is_k_simple(P, k)


def test_k_range_checked():
    P = build_poset(simplex(3))
    with pytest.raises(ValueError):
        is_k_simplicial(P, 3)
    with pytest.raises(ValueError):
        is_k_simple(P, -1)


def test_face_explosion_guard():
    with pytest.raises(RuntimeError):
        build_poset(simplex(6), max_faces=10)


def test_dump_poset_lines():
    out = dump_poset(build_poset(simplex(2)))
    lines = out.strip().split("\n")
    assert lines[0] == "dim -1: "
    assert lines[-1] == "dim 2: 0 1 2"


@settings(max_examples=40)
@given(matrices)
def test_poset_closed_under_intersection(M):
    P = build_poset(M)
    vsets = {v for v, _, _ in P.faces}
    for a in vsets:
        for b in vsets:
            assert a & b in vsets


def test_duality_on_simplex():
    M = simplex(4)
    P = build_poset(M)
    Q = build_poset(transpose(M))
    for k in range(4):
        assert is_k_simple(P, k) == is_k_simplicial(Q, k)
