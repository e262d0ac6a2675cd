"""Exact facet enumeration from integer vertex coordinates.

Brute force over dim-subsets of the points: every subset spanning a
hyperplane gets an integer normal by cofactor expansion, and if all points
lie weakly on one side the incident point set is recorded as a facet.  All
arithmetic is exact, with every intermediate checked against the signed
64-bit range so out-of-range input fails loudly instead of widening.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .incmat import IncidenceMatrix, is_two_neighborly
from .lattice import build_poset

__all__ = [
    "PointList",
    "CatalogEntry",
    "parse_points",
    "format_points",
    "affine_dim",
    "facets_from_vertices",
    "verify_entry",
    "verify_catalog",
    "format_report",
]

_I64 = 1 << 63


def _ck(x: int) -> int:
    if not -_I64 <= x < _I64:
        raise OverflowError("intermediate value exceeds the signed 64-bit range")
    return x


@dataclass(frozen=True)
class PointList:
    dim: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if not self.points:
            raise ValueError("need at least one point")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError("point %r does not have %d coordinates" % (p, self.dim))
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate points")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    d: int
    v: int
    f: int
    points: PointList


def parse_points(text: str) -> CatalogEntry:
    """Parse the coordinate file format: "name d v f", then v rows of d ints."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty coordinate text")
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError("header must be 'name d v f'")
    name = head[0]
    d, v, f = (int(x) for x in head[1:])
    if len(lines) != v + 1:
        raise ValueError("expected %d points, got %d" % (v, len(lines) - 1))
    pts = tuple(tuple(int(x) for x in ln.split()) for ln in lines[1:])
    nums = [int(x) for x in re.findall(r"\d+", name)]
    if nums[-3:] != [d, v, f]:
        raise ValueError("name %r does not encode d=%d v=%d f=%d" % (name, d, v, f))
    return CatalogEntry(name, d, v, f, PointList(d, pts))


def format_points(e: CatalogEntry) -> str:
    out = ["%s %d %d %d" % (e.name, e.d, e.v, e.f)]
    for p in e.points.points:
        out.append(" ".join(str(c) for c in p))
    return "\n".join(out) + "\n"


def _det(mat: list[list[int]]) -> int:
    # Bareiss fraction-free elimination; every division below is exact.
    m = [row[:] for row in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = _ck(_ck(m[i][j] * m[c][c]) - _ck(m[i][c] * m[c][j])) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def _rank(mat: list[list[int]]) -> int:
    m = [row[:] for row in mat]
    nr = len(m)
    nc = len(m[0]) if m else 0
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = _ck(_ck(m[i][j] * m[r][c]) - _ck(m[i][c] * m[r][j])) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nr:
            break
    return r


def affine_dim(pts: PointList) -> int:
    """Dimension of the affine span of the points."""
    p0 = pts.points[0]
    diffs = [[_ck(p[c] - p0[c]) for c in range(pts.dim)] for p in pts.points[1:]]
    if not diffs:
        return 0
    return _rank(diffs)


def facets_from_vertices(pts: PointList, max_points: int = 20) -> IncidenceMatrix:
    """Facet-vertex incidence matrix of the convex hull of full-dimensional pts.

    Rows are facets in sorted bit order, column j is the j-th input point.
    Every input point must be a vertex of the hull (it must lie on at least
    dim facets); anything else raises, since catalog verification treats a
    redundant point as a data error.
    """
    d = pts.dim
    points = pts.points
    npts = len(points)
    if npts > max_points:
        raise ValueError("%d points exceeds the bound %d" % (npts, max_points))
    if affine_dim(pts) != d:
        raise ValueError("points are not full-dimensional")
    found: set[frozenset[int]] = set()
    for sub in combinations(range(npts), d):
        if any(all(i in f for i in sub) for f in found):
            continue
        p0 = points[sub[0]]
        diffs = [[_ck(points[i][c] - p0[c]) for c in range(d)] for i in sub[1:]]
        normal = []
        for j in range(d):
            minor = [[row[c] for c in range(d) if c != j] for row in diffs]
            normal.append(_ck((-1) ** j * _det(minor)))
        if not any(normal):
            continue
        b = 0
        for nv, c in zip(normal, p0):
            b = _ck(b + _ck(nv * c))
        residues = []
        for p in points:
            s = -b
            for nv, c in zip(normal, p):
                s = _ck(s + _ck(nv * c))
            residues.append(s)
        if all(r <= 0 for r in residues) or all(r >= 0 for r in residues):
            found.add(frozenset(i for i, r in enumerate(residues) if r == 0))
    for v in range(npts):
        on = sum(1 for f in found if v in f)
        if on < d:
            raise ValueError("point %d lies on %d < %d facets: not a vertex" % (v, on, d))
    rows = []
    for f in found:
        x = 0
        for j in f:
            x |= 1 << (npts - 1 - j)
        rows.append(x)
    rows.sort()
    return IncidenceMatrix(npts, rows)


def verify_entry(e: CatalogEntry) -> list[tuple[str, bool, str]]:
    """Run all checks for one entry; returns (check name, passed, detail) triples."""
    checks = []
    try:
        ad = affine_dim(e.points)
        checks.append(("dim", ad == e.d, "affine dim %d, expected %d" % (ad, e.d)))
        M = facets_from_vertices(e.points)
    except (ValueError, OverflowError) as exc:
        checks.append(("hull", False, str(exc)))
        return checks
    checks.append(("vertices", M.cols == e.v, "%d columns, expected %d" % (M.cols, e.v)))
    checks.append(("facets", M.rows == e.f, "%d rows, expected %d" % (M.rows, e.f)))
    ld = build_poset(M).dim
    checks.append(("lattice-dim", ld == e.d, "lattice dim %d, expected %d" % (ld, e.d)))
    n2 = is_two_neighborly(M)
    checks.append(("2-neighborly", n2, "matrix 2-neighborly: %s" % n2))
    coords = (M.cols - ad - 1, M.rows - ad - 1)
    named = (e.v - e.d - 1, e.f - e.d - 1)
    checks.append(("scatter", coords == named, "computed %r, named %r" % (coords, named)))
    return checks


def verify_catalog(entries: list[CatalogEntry]) -> list[tuple[str, list[tuple[str, bool, str]]]]:
    return [(e.name, verify_entry(e)) for e in entries]


def format_report(report: list[tuple[str, list[tuple[str, bool, str]]]]) -> str:
    lines = []
    for name, checks in report:
        bad = [c for c in checks if not c[1]]
        if not bad:
            lines.append("PASS %s" % name)
        else:
            for cname, _, detail in bad:
                lines.append("FAIL %s %s: %s" % (name, cname, detail))
    return "\n".join(lines) + "\n"
