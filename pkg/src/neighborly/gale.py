"""Gale-diagram side of the classification: the d+2 and d+3 vertex cases.

A d-polytope with d+3 vertices is encoded by a reduced diagram: labels
m_0..m_{2n-1} on the vertices of a regular 2n-gon plus a center label mC.
Facets correspond to cofacets of the diagram: the center point, an
antipodal label pair, or a label triangle strictly containing the center.
The d+2 case degenerates to an unordered multiplicity pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = [
    "ReducedGaleDiagram",
    "parse_diagram",
    "format_diagram",
    "is_valid_diagram",
    "enumerate_gale_pairs",
    "count_cofacets",
    "is_2neighborly_diagram",
    "enumerate_minimal_diagrams",
    "enumerate_neighborly_labelings",
    "neighborly_labelings_array",
    "decrement_deltas_array",
    "decrement_delta",
    "increment_delta",
    "diagram_to_profile",
]


@dataclass(frozen=True)
class ReducedGaleDiagram:
    n: int
    labels: tuple[int, ...]
    mC: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2 diameters")
        if len(self.labels) != 2 * self.n:
            raise ValueError("expected %d labels" % (2 * self.n))
        if any(v < 0 for v in self.labels) or self.mC < 0:
            raise ValueError("labels must be nonnegative")
        object.__setattr__(self, "labels", tuple(self.labels))


def parse_diagram(text: str) -> ReducedGaleDiagram:
    """Parse "n=<n> mC=<c> labels=<m0>,<m1>,...,<m_{2n-1}>"."""
    fields = dict(part.split("=", 1) for part in text.split())
    try:
        n = int(fields["n"])
        mC = int(fields["mC"])
        labels = tuple(int(x) for x in fields["labels"].split(","))
    except (KeyError, ValueError) as e:
        raise ValueError("bad diagram text %r" % text) from e
    return ReducedGaleDiagram(n, labels, mC)


def format_diagram(D: ReducedGaleDiagram) -> str:
    return "n=%d mC=%d labels=%s" % (D.n, D.mC, ",".join(map(str, D.labels)))


def _half_plane_sums(n: int, labels) -> list[int]:
    # open half plane after position i: the n-1 positions i+1 .. i+n-1
    nn = 2 * n
    return [sum(labels[(i + j) % nn] for j in range(1, n)) for i in range(nn)]


def _valid_labels(n: int, labels, neighborly: bool = False) -> bool:
    nn = 2 * n
    if any(labels[i] + labels[i + n] == 0 for i in range(n)):
        return False  # a diameter may not be empty
    if any(labels[i] + labels[(i + 1) % nn] == 0 for i in range(nn)):
        return False  # no two adjacent empty positions
    bound = 3 if neighborly else 2
    return all(s >= bound for s in _half_plane_sums(n, labels))


def is_valid_diagram(D: ReducedGaleDiagram) -> bool:
    """Structural validity: nonempty diameters, no adjacent empty pair,
    every open half plane sums to at least 2."""
    return _valid_labels(D.n, D.labels)


def is_2neighborly_diagram(D: ReducedGaleDiagram) -> bool:
    """Encoded polytope is 2-neighborly: every open half plane sums >= 3."""
    return all(s >= 3 for s in _half_plane_sums(D.n, D.labels))


def enumerate_gale_pairs(excess: int) -> list[tuple[int, int]]:
    """Unordered pairs {m1, m-1}, both >= 3 (2-neighborliness), whose encoded
    polytope has at most d + 2 + excess facets.

    Facets = m0 + m1*m-1 and d + 2 = m0 + m1 + m-1, so the bound reads
    m1*m-1 <= m1 + m-1 + excess independently of m0.
    """
    if excess < 0:
        raise ValueError("excess must be nonnegative")
    out = []
    a = 3
    while (a - 1) * (a - 1) <= excess + 1:
        b = a
        while (a - 1) * (b - 1) <= excess + 1:
            out.append((a, b))
            b += 1
        a += 1
    return out


def _triangle_gaps_ok(n: int, i: int, j: int, k: int) -> bool:
    # i < j < k on the 2n-gon; all three arc gaps strictly below n keeps the
    # center strictly inside (a gap of exactly n is the antipodal case)
    return j - i < n and k - j < n and 2 * n - (k - i) < n


def count_cofacets(D: ReducedGaleDiagram) -> int:
    """Number of facets of the encoded polytope: center points, antipodal
    pairs, and triangles strictly containing the center."""
    n, labels = D.n, D.labels
    total = D.mC + sum(labels[i] * labels[i + n] for i in range(n))
    for i, j, k in combinations(range(2 * n), 3):
        if _triangle_gaps_ok(n, i, j, k):
            total += labels[i] * labels[j] * labels[k]
    return total


def _canon_labels(n: int, labels) -> tuple[int, ...]:
    nn = 2 * n
    best = None
    for lab in (tuple(labels), tuple(reversed(labels))):
        for r in range(nn):
            cand = lab[r:] + lab[:r]
            if best is None or cand < best:
                best = cand
    return best


def _is_minimal(n: int, labels) -> bool:
    for i in range(2 * n):
        if labels[i] == 0:
            continue
        dec = list(labels)
        dec[i] -= 1
        if _valid_labels(n, dec, neighborly=True):
            return False
    return True


def enumerate_minimal_diagrams(
    max_label: int, max_n: int, max_excess: int | None = 9
) -> list[ReducedGaleDiagram]:
    """All decrement-minimal 2-neighborly diagrams with mC = 0, labels up to
    max_label and n up to max_n, one representative per rotation/reflection
    class, sorted by (n, labels).

    max_excess bounds cofacets by (label sum - 3) + max_excess, i.e. facets
    by d + max_excess; the default keeps exactly the classification targets.
    Pass None to drop the bound.
    """
    if max_label < 1 or max_n < 2:
        raise ValueError("need max_label >= 1 and max_n >= 2")
    found: dict[tuple[int, tuple[int, ...]], None] = {}
    for n in range(2, max_n + 1):
        nn = 2 * n
        # for each next position q, the earlier pairs completing a
        # center-containing triangle with q
        pairs = [
            [
                (i, j)
                for i in range(q)
                for j in range(i + 1, q)
                if j - i < n and q - j < n and q - i > n
            ]
            for q in range(nn)
        ]
        m = [0] * nn

        def rec(p, s, bt, live, front, n=n, nn=nn, pairs=pairs, m=m):
            if p == nn:
                if not _valid_labels(n, m, neighborly=True):
                    return
                if max_excess is not None and bt > s - 3 + max_excess:
                    return
                if not _is_minimal(n, m):
                    return
                found.setdefault((n, _canon_labels(n, m)))
                return
            # cofacet weight of value v at p: v times this pair sum
            ps = 0
            for i, j in pairs[p]:
                ps += m[i] * m[j]
            if p >= n:
                ps += m[p - n]
            wbase = sum(m[p - n + 2 : p]) if p >= n - 1 else 0
            zprev = p >= 1 and m[p - 1] == 0
            p2dead = p >= n and m[p - n] == 0
            slack = (
                max_label * (nn - 1 - p) - 3 + max_excess
                if max_excess is not None
                else None
            )
            for v in range(max_label + 1):
                if v == 0 and (zprev or p2dead):
                    continue
                # the half plane ending at p is complete once p >= n-1
                if p >= n - 1 and wbase + v < 3:
                    continue
                bt2 = bt + v * ps
                s2 = s + v
                if slack is not None and bt2 > s2 + slack:
                    continue
                m[p] = v
                # keep only rotations still tied with the base ordering; a
                # rotation proven lexicographically smaller kills the branch
                live2 = []
                front2 = front
                copied = False
                smaller = False
                for r in live:
                    i = front[r]
                    status = 0
                    while i <= p:
                        j = i + r
                        if j >= nn:
                            j -= nn
                        if j > p:
                            break
                        d = m[j] - m[i]
                        if d:
                            status = d
                            break
                        i += 1
                    if status < 0:
                        smaller = True
                        break
                    if status > 0:
                        continue
                    live2.append(r)
                    if i != front[r]:
                        if not copied:
                            front2 = front[:]
                            copied = True
                        front2[r] = i
                if not smaller:
                    rec(p + 1, s2, bt2, live2, front2)
            m[p] = 0

        rec(0, 0, 0, list(range(1, nn)), [0] * nn)
    diagrams = [ReducedGaleDiagram(n, labels) for n, labels in sorted(found)]
    return diagrams


def enumerate_neighborly_labelings(n: int, max_label: int):
    """All label vectors on the 2n-gon (mC = 0) that are valid and encode a
    2-neighborly polytope.  Plain exhaustive scan; intended for property
    sweeps at small n."""
    nn = 2 * n
    m = [0] * nn

    def rec(p):
        if p == nn:
            if _valid_labels(n, m, neighborly=True):
                yield tuple(m)
            return
        zprev = p >= 1 and m[p - 1] == 0
        p2dead = p >= n and m[p - n] == 0
        for v in range(max_label + 1):
            if v == 0 and (zprev or p2dead):
                continue
            m[p] = v
            yield from rec(p + 1)
        m[p] = 0

    yield from rec(0)


def neighborly_labelings_array(n: int, max_label: int) -> np.ndarray:
    """Vectorized twin of enumerate_neighborly_labelings: one row per valid
    2-neighborly label vector.  Meant for bulk property sweeps."""
    nn = 2 * n
    base = max_label + 1
    count = base**nn
    idx = np.arange(count, dtype=np.int64)
    lab = np.empty((count, nn), dtype=np.int8)
    for p in range(nn):
        lab[:, p] = (idx // base ** (nn - 1 - p)) % base
    keep = np.ones(count, dtype=bool)
    for i in range(n):
        keep &= lab[:, i] + lab[:, i + n] > 0
    for i in range(nn):
        keep &= lab[:, i] + lab[:, (i + 1) % nn] > 0
    lab = lab[keep]
    win = np.zeros(len(lab), dtype=np.int16)
    ok = np.ones(len(lab), dtype=bool)
    for i in range(nn):
        win[:] = 0
        for j in range(1, n):
            win += lab[:, (i + j) % nn]
        ok &= win >= 3
    return lab[ok]


def _triangle_partners(n: int, p: int) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i, j in combinations(range(2 * n), 2)
        if i != p and j != p and _triangle_gaps_ok(n, *sorted((i, j, p)))
    ]


def decrement_deltas_array(n: int, lab: np.ndarray):
    """Per-position cofacet drops for each labeling row, plus which
    decrements keep the diagram valid.  Rows must already be 2-neighborly,
    which makes every open half plane of a decrement automatically >= 2."""
    nn = 2 * n
    N = len(lab)
    wide = lab.astype(np.int32)
    deltas = np.zeros((N, nn), dtype=np.int32)
    ok = np.zeros((N, nn), dtype=bool)
    for p in range(nn):
        d = wide[:, (p + n) % nn].copy()
        for i, j in _triangle_partners(n, p):
            d += wide[:, i] * wide[:, j]
        deltas[:, p] = d
        ok[:, p] = (
            (wide[:, p] > 0)
            & (wide[:, p] + wide[:, (p + n) % nn] >= 2)
            & (wide[:, p] + wide[:, (p - 1) % nn] >= 2)
            & (wide[:, p] + wide[:, (p + 1) % nn] >= 2)
        )
    return deltas, ok


def decrement_delta(D: ReducedGaleDiagram, i: int) -> int | None:
    """Drop in cofacet count from decrementing label i, or None when the
    decremented diagram is no longer structurally valid."""
    if not 0 <= i < 2 * D.n:
        raise IndexError("position out of range")
    if D.labels[i] == 0:
        return None
    dec = list(D.labels)
    dec[i] -= 1
    if not _valid_labels(D.n, dec):
        return None
    D2 = ReducedGaleDiagram(D.n, tuple(dec), D.mC)
    return count_cofacets(D) - count_cofacets(D2)


def increment_delta(D: ReducedGaleDiagram, i: int) -> int:
    """Growth in cofacet count from adding one point at existing position i."""
    if not 0 <= i < 2 * D.n:
        raise IndexError("position out of range")
    inc = list(D.labels)
    inc[i] += 1
    D2 = ReducedGaleDiagram(D.n, tuple(inc), D.mC)
    return count_cofacets(D2) - count_cofacets(D)


def diagram_to_profile(D: ReducedGaleDiagram) -> tuple[int, int, int, bool]:
    """(dimension, vertices, facets, is_pyramid) of the encoded polytope."""
    verts = D.mC + sum(D.labels)
    return verts - 3, verts, count_cofacets(D), D.mC > 0
