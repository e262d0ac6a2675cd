"""Facet-vertex incidence matrices stored as bitset rows.

Rows are facets, columns are vertices.  A row is a Python int with column 0
at the most significant bit, so comparing rows as ints is the same as
comparing them as left-to-right binary strings.
"""

from __future__ import annotations

from typing import Iterable, Iterator

__all__ = [
    "IncidenceMatrix",
    "parse_matrix",
    "format_matrix",
    "get_facet",
    "is_two_neighborly",
    "validate",
    "pyramid",
    "transpose",
    "simplex",
]


class IncidenceMatrix:
    """Immutable k x n 0/1 matrix, hashable, rows as int bitsets."""

    __slots__ = ("rows", "cols", "bits")

    def __init__(self, cols: int, bits: Iterable[int]):
        bits = tuple(bits)
        if cols < 1 or len(bits) < 1:
            raise ValueError("need at least one row and one column")
        top = 1 << cols
        for r in bits:
            if not 0 <= r < top:
                raise ValueError("row value %r does not fit in %d columns" % (r, cols))
        self.rows = len(bits)
        self.cols = cols
        self.bits = bits

    @classmethod
    def from_lists(cls, entries: Iterable[Iterable[int]]) -> "IncidenceMatrix":
        rows = [list(r) for r in entries]
        cols = len(rows[0])
        bits = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            x = 0
            for e in r:
                if e not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                x = (x << 1) | e
            bits.append(x)
        return cls(cols, bits)

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> (self.cols - 1 - j)) & 1

    def row_list(self, i: int) -> list[int]:
        return [self.entry(i, j) for j in range(self.cols)]

    def column_masks(self) -> list[int]:
        """Columns as int bitsets, bit i = row i."""
        out = []
        for j in range(self.cols):
            sh = self.cols - 1 - j
            c = 0
            for i, r in enumerate(self.bits):
                c |= ((r >> sh) & 1) << i
            out.append(c)
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IncidenceMatrix)
            and self.cols == other.cols
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.bits))

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __repr__(self) -> str:
        return "IncidenceMatrix(%dx%d)" % (self.rows, self.cols)


def parse_matrix(text: str) -> IncidenceMatrix:
    """Parse the matrix text format: "k n" header, then k rows of n 0/1 entries."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'k n'")
    k, n = int(head[0]), int(head[1])
    if len(lines) != k + 1:
        raise ValueError("expected %d rows, got %d" % (k, len(lines) - 1))
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != n:
            raise ValueError("ragged row %r" % ln)
        rows.append([int(p) for p in parts])
    return IncidenceMatrix.from_lists(rows)


def format_matrix(M: IncidenceMatrix) -> str:
    out = ["%d %d" % (M.rows, M.cols)]
    for i in range(M.rows):
        out.append(" ".join(str(e) for e in M.row_list(i)))
    return "\n".join(out) + "\n"


def get_facet(M: IncidenceMatrix, i: int) -> IncidenceMatrix:
    """Extract the incidence matrix of the facet given by row i.

    Keeps the columns incident to row i, restricts every other row to those
    columns, and keeps only the rows that are maximal among the restrictions
    (these are the facets of the facet).  Equal restrictions keep the first
    occurrence; row and column order is otherwise preserved.
    """
    if not 0 <= i < M.rows:
        raise IndexError("row index %d out of range" % i)
    n = M.cols
    shifts = [n - 1 - j for j in range(n) if (M.bits[i] >> (n - 1 - j)) & 1]
    n2 = len(shifts)
    restricted = []
    for r in range(M.rows):
        if r == i:
            continue
        row = M.bits[r]
        x = 0
        for sh in shifts:
            x = (x << 1) | ((row >> sh) & 1)
        restricted.append(x)
    keep = []
    for a, ra in enumerate(restricted):
        dominated = False
        for b, rb in enumerate(restricted):
            if a == b:
                continue
            if ra & ~rb == 0 and (ra != rb or b < a):
                dominated = True
                break
        if not dominated:
            keep.append(ra)
    return IncidenceMatrix(n2, keep)


def is_two_neighborly(M: IncidenceMatrix) -> bool:
    """True iff no intersection of two columns is a subset of a third column."""
    if M.cols < 2:
        raise ValueError("need at least two columns")
    cm = M.column_masks()
    n = M.cols
    for a in range(n):
        ca = cm[a]
        for b in range(a + 1, n):
            inter = ca & cm[b]
            for w in range(n):
                if w == a or w == b:
                    continue
                if inter & ~cm[w] == 0:
                    return False
    return True


def validate(M: IncidenceMatrix, d: int) -> list[str]:
    """Violations of the d-polytope matrix invariants; empty list means valid.

    Checked: every row and column has at least d ones, rows form an
    antichain, columns form an antichain (subset includes equality).
    Violations are returned as data so searches can use this as a filter.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    out = []
    for i, r in enumerate(M.bits):
        p = r.bit_count()
        if p < d:
            out.append("row-ones: row %d has %d ones, need %d" % (i, p, d))
    cm = M.column_masks()
    for j, c in enumerate(cm):
        p = c.bit_count()
        if p < d:
            out.append("col-ones: column %d has %d ones, need %d" % (j, p, d))
    for i in range(M.rows):
        for j in range(M.rows):
            if i != j and M.bits[i] & ~M.bits[j] == 0:
                out.append("row-antichain: row %d is a subset of row %d" % (i, j))
    for i in range(M.cols):
        for j in range(M.cols):
            if i != j and cm[i] & ~cm[j] == 0:
                out.append("col-antichain: column %d is a subset of column %d" % (i, j))
    return out


def pyramid(M: IncidenceMatrix) -> IncidenceMatrix:
    """Apex column (on every old facet) plus base row (on every old vertex)."""
    bits = [(r << 1) | 1 for r in M.bits]
    bits.append(((1 << M.cols) - 1) << 1)
    return IncidenceMatrix(M.cols + 1, bits)


def transpose(M: IncidenceMatrix) -> IncidenceMatrix:
    return IncidenceMatrix.from_lists(
        [[M.entry(i, j) for i in range(M.rows)] for j in range(M.cols)]
    )


def simplex(d: int) -> IncidenceMatrix:
    """The d-simplex: complement of the (d+1)x(d+1) identity."""
    if d < 1:
        raise ValueError("dimension must be positive")
    full = (1 << (d + 1)) - 1
    return IncidenceMatrix(d + 1, [full ^ (1 << (d - i)) for i in range(d + 1)])
