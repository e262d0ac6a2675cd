"""Face lattice from an incidence matrix: closure, poset, simplicial/simple tests.

Faces are (vertex bitset, facet bitset, dim) triples.  Vertex bitsets use
the row layout of IncidenceMatrix (column j at bit cols-1-j); facet bitsets
put row i at bit i.  dim is longest-chain rank, so the empty face has dim -1
and the full face carries the combinatorial dimension of the polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from neighborly.incmat import IncidenceMatrix

__all__ = ["FacePoset", "closure", "build_poset", "is_k_simplicial", "is_k_simple", "dump_poset"]


@dataclass(frozen=True)
class FacePoset:
    n: int
    k: int
    faces: tuple[tuple[int, int, int], ...]  # (vmask, fmask, dim), sorted by (dim, vmask)

    @property
    def dim(self) -> int:
        return max(f[2] for f in self.faces)

    def faces_of_dim(self, t: int) -> list[tuple[int, int, int]]:
        return [f for f in self.faces if f[2] == t]

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * self.dim
        for _, _, t in self.faces:
            if 0 <= t < self.dim:
                counts[t] += 1
        return tuple(counts)

    def vertex_indices(self, vmask: int) -> list[int]:
        return [j for j in range(self.n) if (vmask >> (self.n - 1 - j)) & 1]


def closure(M: IncidenceMatrix, S: Iterable[int]) -> frozenset[int]:
    """Vertices lying on every facet that contains all of S.

    If no facet contains S, the result is the full vertex set.
    """
    n = M.cols
    mask = 0
    for j in S:
        if not 0 <= j < n:
            raise ValueError("vertex index %d out of range" % j)
        mask |= 1 << (n - 1 - j)
    acc = (1 << n) - 1
    hit = False
    for r in M.bits:
        if r & mask == mask:
            acc &= r
            hit = True
    if not hit:
        acc = (1 << n) - 1
    return frozenset(j for j in range(n) if (acc >> (n - 1 - j)) & 1)


def build_poset(M: IncidenceMatrix, max_faces: int = 10**6) -> FacePoset:
    """All closed vertex sets with longest-chain dims.

    Closed sets are generated as intersections of facet rows by worklist
    closure starting from the full set; the empty and full faces are always
    included.
    """
    n = M.cols
    full = (1 << n) - 1
    closed = {full}
    queue = [full]
    while queue:
        x = queue.pop()
        for r in M.bits:
            y = x & r
            if y not in closed:
                closed.add(y)
                if len(closed) > max_faces:
                    raise RuntimeError("face explosion: more than %d faces" % max_faces)
                queue.append(y)
    closed.add(0)

    by_size = sorted(closed, key=lambda x: x.bit_count())
    dims: dict[int, int] = {0: -1}
    by_dim: dict[int, list[int]] = {-1: [0]}
    maxdim = -1
    for x in by_size:
        if x == 0:
            continue
        t = -1
        for d in range(maxdim, -2, -1):
            if any(y != x and y & ~x == 0 for y in by_dim.get(d, ())):
                t = d + 1
                break
        dims[x] = t
        by_dim.setdefault(t, []).append(x)
        maxdim = max(maxdim, t)

    faces = []
    for x in closed:
        fmask = 0
        for i, r in enumerate(M.bits):
            if x & ~r == 0:
                fmask |= 1 << i
        faces.append((x, fmask, dims[x]))
    faces.sort(key=lambda f: (f[2], f[0]))
    return FacePoset(n, M.rows, tuple(faces))


def is_k_simplicial(P: FacePoset, k: int) -> bool:
    """Every k-dimensional face has exactly k+1 vertices."""
    if not 0 <= k < P.dim:
        raise ValueError("k must be in [0, dim)")
    return all(v.bit_count() == k + 1 for v, _, t in P.faces if t == k)


def is_k_simple(P: FacePoset, k: int) -> bool:
    """Every face of dimension dim-1-k lies in exactly k+1 facets."""
    if not 0 <= k < P.dim:
        raise ValueError("k must be in [0, dim)")
    t = P.dim - 1 - k
    return all(f.bit_count() == k + 1 for _, f, tt in P.faces if tt == t)


def dump_poset(P: FacePoset) -> str:
    lines = []
    for v, _, t in P.faces:
        lines.append("dim %d: %s" % (t, " ".join(str(j) for j in P.vertex_indices(v))))
    return "\n".join(lines) + "\n"
