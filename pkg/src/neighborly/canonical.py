"""Canonical forms of incidence matrices under row/column permutations.

Two paths share one equivalence relation.  Narrow matrices (cols <= the
width threshold) get the exact lexicographic minimum, over all column
permutations, of the matrix with rows sorted ascending.  Wider matrices are
canonically labeled by individualization-refinement on the bipartite
row/column incidence structure.  A matrix is keyed by exactly one path,
chosen by its width, so equal keys always mean permutation equivalence.

FacetIndex answers "is A equivalent to some allowed facet" the fast way:
narrow members are expanded into every (column permutation, sorted rows)
variant for a binary search; wide members fall back to key comparison.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np

from neighborly.incmat import IncidenceMatrix

__all__ = [
    "WIDTH_THRESHOLD",
    "canonical_form",
    "canonical_key",
    "column_automorphisms",
    "FacetIndex",
    "build_index",
    "contains",
]

WIDTH_THRESHOLD = 10


# ---------------------------------------------------------------------------
# shared orbit pruning

def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


class _SiblingOrbits:
    """Orbit filter for one branching level.

    Automorphism generators discovered at leaves let us skip siblings in the
    same orbit as an already explored one.  Only generators fixing all points
    fixed so far apply; the union-find is rebuilt lazily when new generators
    appear, never per query.
    """

    def __init__(self, n: int, gens: list, fixed: Sequence[int]):
        self.n = n
        self.gens = gens
        self.fixed = fixed
        self.version = -1
        self.parent: list[int] | None = None
        self.explored: list[int] = []

    def skip(self, x: int) -> bool:
        if not self.gens or not self.explored:
            return False
        if self.version != len(self.gens):
            parent = list(range(self.n))
            for g in self.gens:
                if all(g[v] == v for v in self.fixed):
                    for a in range(self.n):
                        ra, rb = _find(parent, a), _find(parent, g[a])
                        if ra != rb:
                            parent[ra] = rb
            self.parent = parent
            self.version = len(self.gens)
        rx = _find(self.parent, x)
        return any(_find(self.parent, u) == rx for u in self.explored)

    def done(self, x: int) -> None:
        self.explored.append(x)


# ---------------------------------------------------------------------------
# narrow path: branch and bound over column orders

def _canon_narrow(bits: Sequence[int], ncols: int) -> tuple[int, ...]:
    R = len(bits)
    colbits = [
        tuple((row >> (ncols - 1 - c)) & 1 for row in bits) for c in range(ncols)
    ]
    pops = [row.bit_count() for row in bits]
    best: tuple[int, ...] | None = None
    best_perm: list[int] | None = None
    gens: list[tuple[int, ...]] = []
    perm: list[int] = []
    used = [False] * ncols

    def rec(t: int, partial: list[int], rem: list[int]) -> None:
        nonlocal best, best_perm
        if t == ncols:
            leaf = tuple(sorted(partial))
            if best is None or leaf < best:
                best = leaf
                best_perm = perm.copy()
            elif leaf == best:
                sigma = list(range(ncols))
                for i in range(ncols):
                    sigma[best_perm[i]] = perm[i]
                gens.append(tuple(sigma))
            return
        s = ncols - 1 - t
        scored = []
        seen_content = set()
        for c in range(ncols):
            if used[c]:
                continue
            cb = colbits[c]
            if cb in seen_content:
                continue
            seen_content.add(cb)
            newpart = [partial[r] * 2 + cb[r] for r in range(R)]
            newrem = [rem[r] - cb[r] for r in range(R)]
            # every unplaced one can at best land immediately after the
            # prefix, so this bound is reachable-or-better for the full row
            lb = sorted((newpart[r] << s) | ((1 << newrem[r]) - 1) for r in range(R))
            scored.append((lb, newpart, newrem, c))
        scored.sort(key=lambda e: e[0])
        orbits = _SiblingOrbits(ncols, gens, perm.copy())
        for lb, newpart, newrem, c in scored:
            if best is not None and tuple(lb) > best:
                continue
            if orbits.skip(c):
                continue
            used[c] = True
            perm.append(c)
            rec(t + 1, newpart, newrem)
            perm.pop()
            used[c] = False
            orbits.done(c)

    rec(0, [0] * R, pops[:])
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# wide path: individualization-refinement on the bipartite structure

def _canon_wide(bits: Sequence[int], ncols: int) -> tuple[int, ...]:
    R = len(bits)
    N = R + ncols
    # neighbor bitmask per object; rows and columns share one index space
    nb = [0] * N
    for r, row in enumerate(bits):
        for c in range(ncols):
            if (row >> (ncols - 1 - c)) & 1:
                nb[r] |= 1 << (R + c)
                nb[R + c] |= 1 << r

    best: tuple | None = None
    best_labels: tuple[list[int], list[int]] | None = None
    gens: list[tuple[int, ...]] = []

    def refine(
        cells: list[list[int]], seeds: list[list[int]] | None = None
    ) -> list[list[int]]:
        # seeds: cells whose counts may newly distinguish others; a partition
        # that was equitable before a split only needs the split parts here
        multi = sum(1 for c in cells if len(c) > 1)
        work = list(cells) if seeds is None else list(seeds)
        stale: dict[int, list[int]] = {}
        while work and multi:
            w = work.pop()
            if id(w) in stale:
                del stale[id(w)]
                continue
            wmask = 0
            for x in w:
                wmask |= 1 << x
            i = 0
            while i < len(cells):
                cell = cells[i]
                if len(cell) == 1:
                    i += 1
                    continue
                d0 = (nb[cell[0]] & wmask).bit_count()
                if all((nb[x] & wmask).bit_count() == d0 for x in cell):
                    i += 1
                    continue
                pairs = sorted(((nb[x] & wmask).bit_count(), x) for x in cell)
                frags: list[list[int]] = []
                curd = None
                for d, x in pairs:
                    if d != curd:
                        frags.append([])
                        curd = d
                    frags[-1].append(x)
                cells[i : i + 1] = frags
                if cell is not w:
                    stale[id(cell)] = cell
                work.extend(frags)
                multi += sum(1 for f in frags if len(f) > 1) - 1
                i += len(frags)
        return cells

    def serialize(cells: list[list[int]]):
        roworder = [c[0] for c in cells if c[0] < R]
        colorder = [c[0] - R for c in cells if c[0] >= R]
        out = []
        for r in roworder:
            row = bits[r]
            v = 0
            for c in colorder:
                v = v * 2 + ((row >> (ncols - 1 - c)) & 1)
            out.append(v)
        return tuple(out), roworder, colorder

    def rec(cells: list[list[int]], tracepath: tuple) -> None:
        nonlocal best, best_labels
        target = None
        tlen = 0
        for i, cell in enumerate(cells):
            L = len(cell)
            if L > 1 and (target is None or L < tlen):
                target = i
                tlen = L
        if target is None:
            ser, roworder, colorder = serialize(cells)
            cand = (tracepath, ser)
            if best is None or cand < best:
                best = cand
                best_labels = (roworder, colorder)
            elif cand == best:
                sigma = list(range(N))
                for i, r in enumerate(best_labels[0]):
                    sigma[r] = roworder[i]
                for i, c in enumerate(best_labels[1]):
                    sigma[R + c] = R + colorder[i]
                gens.append(tuple(sigma))
            return
        cell = cells[target]
        depth = len(tracepath)
        fixed = [c[0] for c in cells if len(c) == 1]
        orbits = _SiblingOrbits(N, gens, fixed)
        for x in cell:
            if orbits.skip(x):
                continue
            rest = [y for y in cell if y != x]
            # refine reshuffles only its own outer list; inner cells are
            # never mutated, so sharing them across siblings is safe
            pick = [x]
            ref = refine(
                cells[:target] + [pick, rest] + cells[target + 1 :], [pick, rest]
            )
            trace = (target, tuple(len(c) for c in ref))
            if best is not None:
                bt = best[0]
                if depth < len(bt) and trace > bt[depth]:
                    orbits.done(x)
                    continue
            rec(ref, tracepath + (trace,))
            orbits.done(x)

    start = refine([list(range(R)), list(range(R, N))])
    rec(start, (tuple(len(c) for c in start),))
    assert best is not None
    return tuple(sorted(best[1]))


# ---------------------------------------------------------------------------
# public surface

def canonical_form(M: IncidenceMatrix) -> IncidenceMatrix:
    """The class representative: same matrix up to row/column permutations."""
    if M.cols <= WIDTH_THRESHOLD:
        rows = _canon_narrow(M.bits, M.cols)
    else:
        rows = _canon_wide(M.bits, M.cols)
    return IncidenceMatrix(M.cols, rows)


def canonical_key(M: IncidenceMatrix) -> bytes:
    """Byte key: shape header plus the canonical bit block, row-major."""
    form = canonical_form(M)
    nbytes = (form.cols + 7) // 8
    head = struct.pack(">HH", form.rows, form.cols)
    return head + b"".join(r.to_bytes(nbytes, "big") for r in form.bits)


def column_automorphisms(M: IncidenceMatrix) -> list[tuple[int, ...]]:
    """All column permutations mapping the row multiset onto itself.

    perm[j] is the old column landing in position j.  Built one image column
    at a time; a prefix survives while the sorted row patterns over it match
    the sorted patterns over the same number of leading columns, which is
    preservation of the projected row multiset.
    """
    n, rows = M.cols, M.bits
    targets = []
    pats = [0] * len(rows)
    for d in range(n):
        sh = n - 1 - d
        pats = [(p << 1) | ((r >> sh) & 1) for p, r in zip(pats, rows)]
        targets.append(sorted(pats))

    out: list[tuple[int, ...]] = []
    perm: list[int] = []
    used = [False] * n

    def rec(d, cur):
        if d == n:
            out.append(tuple(perm))
            return
        for c in range(n):
            if used[c]:
                continue
            sh = n - 1 - c
            nxt = [(p << 1) | ((r >> sh) & 1) for p, r in zip(cur, rows)]
            if sorted(nxt) != targets[d]:
                continue
            used[c] = True
            perm.append(c)
            rec(d + 1, nxt)
            perm.pop()
            used[c] = False

    rec(0, [0] * len(rows))
    return out


def _pack_sorted(bits: Iterable[int], k: int) -> np.ndarray:
    arr = np.array(sorted(bits), dtype=np.uint16)
    assert arr.shape == (k,)
    return arr


def _void_view(arr2d: np.ndarray) -> np.ndarray:
    arr2d = np.ascontiguousarray(arr2d)
    dt = np.dtype((np.void, arr2d.dtype.itemsize * arr2d.shape[1]))
    return arr2d.view(dt).ravel()


def _perm_array(n: int) -> np.ndarray:
    if n == 1:
        return np.zeros((1, 1), dtype=np.int8)
    sub = _perm_array(n - 1)
    f = len(sub)
    out = np.empty((n * f, n), dtype=np.int8)
    for i in range(n):
        rest = np.array([x for x in range(n) if x != i], dtype=np.int8)
        out[i * f : (i + 1) * f, 0] = i
        out[i * f : (i + 1) * f, 1:] = rest[sub]
    return out


def _expand_member(M: IncidenceMatrix, chunk: int = 250_000) -> np.ndarray:
    """All (column permutation, row sort) variants, deduplicated, as a sorted
    void array of packed row vectors."""
    k, n = M.rows, M.cols
    mat = np.array(
        [[M.entry(i, j) for j in range(n)] for i in range(k)], dtype=np.uint16
    )
    weights = np.array([1 << (n - 1 - p) for p in range(n)], dtype=np.uint16)
    perms = _perm_array(n)
    pieces = []
    for lo in range(0, len(perms), chunk):
        pp = perms[lo : lo + chunk]
        block = mat[:, pp]  # (k, P, n)
        packed = (block * weights).sum(axis=2, dtype=np.uint16)  # (k, P)
        packed = np.sort(packed.T, axis=1)  # rows ascending
        pieces.append(_void_view(packed).copy())
    allv = np.concatenate(pieces)
    return np.unique(allv)


def _degree_sig_rows(rows, ncols: int) -> tuple:
    rdeg = tuple(sorted(r.bit_count() for r in rows))
    cdeg = [0] * ncols
    for r in rows:
        j = ncols - 1
        while r:
            cdeg[j] += r & 1
            r >>= 1
            j -= 1
    return rdeg, tuple(sorted(cdeg))


def _degree_sig(A: IncidenceMatrix) -> tuple:
    return _degree_sig_rows(A.bits, A.cols)


# shapes whose variant expansion fits in a plain set answer queries by
# hashing; larger ones stay as sorted packed arrays for binary search
SET_BUCKET_LIMIT = 200_000


class FacetIndex:
    """Membership oracle for a fixed list of allowed facet matrices."""

    def __init__(self, sets, buckets, wide_keys, wide_sigs, threshold):
        self._sets = sets  # (k, n) -> frozenset of sorted row tuples
        self._buckets = buckets  # (k, n) -> sorted void array of variants
        self._wide = wide_keys  # (k, n) -> frozenset of canonical keys
        self._wide_sigs = wide_sigs  # (k, n) -> frozenset of degree signatures
        self._threshold = threshold
        self._key_cache: dict[tuple, bool] = {}

    def contains_packed(self, ncols: int, rows) -> bool:
        """Membership test from raw row bitsets, cheapest path first.

        A shape can be spread over several tables (members demoted to keys
        when the expansion budget ran out), so a miss falls through.
        """
        shape = (len(rows), ncols)
        small = self._sets.get(shape)
        if small is not None and tuple(sorted(rows)) in small:
            return True
        bucket = self._buckets.get(shape)
        if bucket is not None:
            q = _void_view(_pack_sorted(rows, len(rows)).reshape(1, -1))[0]
            pos = int(np.searchsorted(bucket, q))
            if pos < len(bucket) and bucket[pos] == q:
                return True
        keys = self._wide.get(shape)
        if keys is None:
            return False
        # row/column degree multisets are permutation invariants, so a miss
        # here settles the query without a canonical labeling
        if _degree_sig_rows(rows, ncols) not in self._wide_sigs[shape]:
            return False
        ident = (shape, tuple(rows))
        hit = self._key_cache.get(ident)
        if hit is None:
            hit = canonical_key(IncidenceMatrix(ncols, rows)) in keys
            self._key_cache[ident] = hit
        return hit

    def contains(self, A: IncidenceMatrix) -> bool:
        return self.contains_packed(A.cols, A.bits)

    def __contains__(self, A: IncidenceMatrix) -> bool:
        return self.contains(A)


def build_index(
    members: Iterable[IncidenceMatrix],
    threshold: int = WIDTH_THRESHOLD,
    max_variants: int = 10**7,
) -> FacetIndex:
    members = list(members)
    total = 0
    buckets: dict[tuple[int, int], list[np.ndarray]] = {}
    wide: dict[tuple[int, int], set[bytes]] = {}
    wide_sigs: dict[tuple[int, int], set[tuple]] = {}
    for M in members:
        f = 1
        for i in range(2, M.cols + 1):
            f *= i
        # over-budget members degrade to key comparisons instead of failing
        if M.cols > threshold or total + f > max_variants:
            wide.setdefault((M.rows, M.cols), set()).add(canonical_key(M))
            wide_sigs.setdefault((M.rows, M.cols), set()).add(_degree_sig(M))
            continue
        total += f
        buckets.setdefault((M.rows, M.cols), []).append(_expand_member(M))
    sets = {}
    merged = {}
    for shape, parts in buckets.items():
        allv = np.unique(np.concatenate(parts))
        if len(allv) <= SET_BUCKET_LIMIT:
            flat = allv.view(np.uint16).reshape(len(allv), shape[0])
            sets[shape] = frozenset(map(tuple, flat.tolist()))
        else:
            merged[shape] = allv
    return FacetIndex(
        sets,
        merged,
        {s: frozenset(v) for s, v in wide.items()},
        {s: frozenset(v) for s, v in wide_sigs.items()},
        threshold,
    )


def contains(idx: FacetIndex, A: IncidenceMatrix) -> bool:
    return idx.contains(A)
