from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from neighborly.hull_verify import (
    CatalogEntry,
    PointList,
    _det,
    _rank,
    affine_dim,
    facets_from_vertices,
    format_points,
    format_report,
    parse_points,
    verify_catalog,
    verify_entry,
)
from neighborly.incmat import is_two_neighborly, simplex
from neighborly.canonical import canonical_key

P469 = CatalogEntry(
    "P_4_6_9",
    4,
    6,
    9,
    PointList(
        4,
        (
            (0, 0, 0, 0),
            (0, 0, 0, 1),
            (0, 0, 1, 0),
            (0, 1, 0, 0),
            (1, 0, 0, 1),
            (1, 1, 1, 0),
        ),
    ),
)


def _simplex_points(d):
    pts = [tuple(0 for _ in range(d))]
    for i in range(d):
        pts.append(tuple(1 if j == i else 0 for j in range(d)))
    return PointList(d, tuple(pts))


def _frac_det(mat):
    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    sign = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            for j in range(c, n):
                m[i][j] -= f * m[c][j]
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    assert out.denominator == 1
    return out.numerator


sq_mats = st.integers(1, 5).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n
    )
)


@given(sq_mats)
def test_det_matches_fraction_elimination(mat):
    assert _det(mat) == _frac_det(mat)


@given(
    st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=5)
)
def test_rank_bounds_and_duplication(mat):
    r = _rank(mat)
    assert 0 <= r <= min(len(mat), 3)
    assert _rank(mat + [mat[0]]) == r


def test_affine_dim_basic():
    assert affine_dim(_simplex_points(4)) == 4
    assert affine_dim(PointList(4, ((0, 0, 0, 0),))) == 0
    collinear = PointList(4, ((0, 0, 0, 0), (1, 1, 0, 0), (2, 2, 0, 0)))
    assert affine_dim(collinear) == 1


def test_simplex_facets():
    M = facets_from_vertices(_simplex_points(5))
    assert (M.rows, M.cols) == (6, 6)
    assert canonical_key(M) == canonical_key(simplex(5))


def test_cube_facets():
    pts = tuple((i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1))
    M = facets_from_vertices(PointList(3, pts))
    assert (M.rows, M.cols) == (6, 8)
    assert all(r.bit_count() == 4 for r in M.bits)
    assert not is_two_neighborly(M)


def test_p469():
    M = facets_from_vertices(P469.points)
    assert (M.rows, M.cols) == (9, 6)
    assert is_two_neighborly(M)
    assert all(ok for _, ok, _ in verify_entry(P469))


def test_facet_spans_hyperplane():
    M = facets_from_vertices(P469.points)
    for i in range(M.rows):
        sub = tuple(P469.points.points[j] for j in range(6) if M.entry(i, j))
        assert affine_dim(PointList(4, sub)) == 3


def test_non_vertex_detected():
    pts = _simplex_points(3).points + ((1, 1, 1),)  # interior-ish? no: outside
    # use a genuine interior point of the simplex scaled up
    pts = tuple(tuple(4 * c for c in p) for p in _simplex_points(3).points) + ((1, 1, 1),)
    with pytest.raises(ValueError, match="not a vertex"):
        facets_from_vertices(PointList(3, pts))


def test_not_full_dimensional():
    flat = PointList(3, ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)))
    with pytest.raises(ValueError, match="full-dimensional"):
        facets_from_vertices(flat)


def test_point_bound():
    with pytest.raises(ValueError, match="exceeds"):
        facets_from_vertices(_simplex_points(5), max_points=3)


def test_overflow_fires():
    big = 1 << 40
    pts = PointList(
        3,
        (
            (0, 0, 0),
            (big, 0, 0),
            (0, big, 0),
            (0, 0, big),
        ),
    )
    with pytest.raises(OverflowError):
        facets_from_vertices(pts)


def test_parse_format_roundtrip():
    text = format_points(P469)
    e = parse_points(text)
    assert e == P469
    assert text.splitlines()[0] == "P_4_6_9 4 6 9"


def test_parse_rejects():
    with pytest.raises(ValueError, match="header"):
        parse_points("P_4_6_9 4 6\n0 0 0 0\n")
    with pytest.raises(ValueError, match="name"):
        parse_points("P_4_6_8 4 1 9\n0 0 0 0\n")
    with pytest.raises(ValueError, match="expected 2 points"):
        parse_points("P_1_2_2 1 2 2\n0\n")


def test_corrupted_entry_fails_named_check():
    pts = list(P469.points.points)
    pts[3] = (0, 1, 0, 1)
    bad = CatalogEntry("P_4_6_9", 4, 6, 9, PointList(4, tuple(pts)))
    report = verify_catalog([bad])
    text = format_report(report)
    assert "FAIL P_4_6_9" in text
    failed = {name for name, ok, _ in report[0][1] if not ok}
    assert failed  # at least one named check failed
    assert failed <= {"dim", "hull", "vertices", "facets", "lattice-dim", "2-neighborly", "scatter"}


def test_report_pass_line():
    assert format_report(verify_catalog([P469])) == "PASS P_4_6_9\n"
