"""Exhaustive enumeration of 2-neighborly incidence matrices over a facet list.

The engine grows candidate matrices out of one distinguished base facet.
Row phase: every unknown facet meets the base in a face, so choose a
multisubset of feasible restriction rows.  Column phase: add the remaining
vertices one column at a time, confirming a row once its restriction
extracts to an allowed facet; confirmed rows are frozen and the very last
column is forced, because each still-unconfirmed facet needs its final
vertex there and nothing else may take one.

Rows are int bitsets with column 0 as the most significant bit; column
masks use bit i for row i.  The candidate column pool lives in a numpy
array so the three superset tests that guard 2-neighborliness run
vectorized against the whole pool after every append.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, islice
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from neighborly.canonical import build_index, canonical_form, column_automorphisms
from neighborly.incmat import (
    IncidenceMatrix,
    get_facet,
    is_two_neighborly,
    parse_matrix,
    validate,
)

__all__ = [
    "CampaignSpec",
    "CampaignOutcome",
    "StarCompletion",
    "StarResult",
    "ResourceAbort",
    "parse_campaign",
    "load_campaign",
    "gen_feasible_rows",
    "gen_feasible_columns",
    "find_matrices",
    "run_campaign",
    "solve_star_completion",
]


@dataclass(frozen=True)
class CampaignSpec:
    """One enumeration task: target shape plus the allowed facet matrices."""

    facet_list: tuple[IncidenceMatrix, ...]
    base_facet: IncidenceMatrix
    dim: int
    vrt: int
    fct: int
    minfv: int

    def __post_init__(self):
        if self.dim < 4:
            raise ValueError("dim must be at least 4")
        if self.vrt <= self.base_facet.cols:
            raise ValueError("vrt must exceed the base facet's vertex count")
        if self.fct <= self.base_facet.rows:
            raise ValueError("fct must exceed the base facet's facet count")
        if self.minfv < self.dim:
            raise ValueError("minfv must be at least dim")
        if self.base_facet not in self.facet_list:
            raise ValueError("base_facet must be a member of facet_list")


class ResourceAbort(Exception):
    """A node or time budget ran out; carries partial progress."""

    def __init__(self, partial, spec_index, next_unit, nodes):
        self.partial = partial
        self.spec_index = spec_index
        self.next_unit = next_unit
        self.nodes = nodes
        super().__init__(
            "aborted at spec %d unit %d after %d nodes"
            % (spec_index, next_unit, nodes)
        )


# ---------------------------------------------------------------------------
# campaign files

_REQUIRED = ("dim", "vertices", "facets", "base_facet", "facet_list")
_KNOWN = set(_REQUIRED) | {"minfv", "mode"}


def parse_campaign(text: str, base_dir=".") -> tuple[list[CampaignSpec], str]:
    """Parse a key=value campaign file into a grid of specs plus a mode.

    `vertices` and `facets` may list several values; one spec is produced
    per (vertex count, facet count) pair.  Matrix paths are resolved
    relative to base_dir.  minfv defaults to dim+3 (dim when the vertex
    count is below dim+3).  mode is "search" unless the file says "star".
    """
    base = Path(base_dir)
    seen: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError("expected key=value, got %r" % line)
        key, val = line.split("=", 1)
        key = key.strip()
        if key not in _KNOWN:
            raise ValueError("unknown campaign key %r" % key)
        if key in seen:
            raise ValueError("duplicate campaign key %r" % key)
        seen[key] = val.strip()
    for key in _REQUIRED:
        if key not in seen:
            raise ValueError("missing campaign key %r" % key)

    dim = int(seen["dim"])
    vrts = list(dict.fromkeys(int(t) for t in seen["vertices"].split()))
    fcts = list(dict.fromkeys(int(t) for t in seen["facets"].split()))
    mode = seen.get("mode", "search")
    if mode not in ("search", "star"):
        raise ValueError("mode must be 'search' or 'star'")

    def load(rel: str) -> IncidenceMatrix:
        return parse_matrix((base / rel).read_text())

    base_facet = load(seen["base_facet"])
    facet_list = tuple(load(p) for p in seen["facet_list"].split())

    specs = []
    for vrt in vrts:
        if "minfv" in seen:
            minfv = int(seen["minfv"])
        else:
            minfv = dim + 3 if vrt >= dim + 3 else dim
        for fct in fcts:
            specs.append(
                CampaignSpec(facet_list, base_facet, dim, vrt, fct, minfv)
            )
    return specs, mode


def load_campaign(path) -> tuple[list[CampaignSpec], str]:
    p = Path(path)
    return parse_campaign(p.read_text(), p.parent)


# ---------------------------------------------------------------------------
# feasible rows and columns

def gen_feasible_rows(F: IncidenceMatrix, min_ones: int) -> list[int]:
    """Rows of width cols(F) that sit strictly inside some row of F.

    A facet other than the base meets it in a proper face, so its
    restriction row must be a proper subset of a base row; min_ones is the
    least number of its vertices that must land inside the base.
    """
    out = []
    for x in range(1 << F.cols):
        if x.bit_count() < min_ones:
            continue
        for r in F.bits:
            if x != r and x & ~r == 0:
                out.append(x)
                break
    return out


def _raw_columns(height: int, minfv: int) -> list[int]:
    # bit height-1 (the base facet's row) stays 0: new vertices avoid it
    out = []
    for ones in range(max(minfv, 0), height):
        for pos in combinations(range(height - 1), ones):
            c = 0
            for p in pos:
                c |= 1 << p
            out.append(c)
    out.sort()
    return out


def _cols_two_neighborly(cms) -> bool:
    n = len(cms)
    for a in range(n):
        for b in range(a + 1, n):
            inter = cms[a] & cms[b]
            for w in range(n):
                if w != a and w != b and inter & ~cms[w] == 0:
                    return False
    return True


def _append_keeps(cms, c: int) -> bool:
    # new violations must involve the appended column, as pair member or
    # as the dominating third
    n = len(cms)
    for a in range(n):
        ca = cms[a]
        iac = ca & c
        for b in range(a + 1, n):
            if (ca & cms[b]) & ~c == 0:
                return False
        for w in range(n):
            if w != a and iac & ~cms[w] == 0:
                return False
    return True


def gen_feasible_columns(M: IncidenceMatrix, minfv: int) -> list[int]:
    """Columns of height rows(M) that could carry a new vertex.

    The last entry is 0 (the base facet, sitting in the last row, never
    gains a vertex), the column meets at least minfv facets, and appending
    it keeps the matrix 2-neighborly.
    """
    if M.cols >= 3 and not is_two_neighborly(M):
        return []
    cms = M.column_masks()
    return [c for c in _raw_columns(M.rows, minfv) if _append_keeps(cms, c)]


# ---------------------------------------------------------------------------
# vectorized pool filtering

def _inv32(x: int) -> np.uint32:
    return np.uint32(~x & 0xFFFFFFFF)


def _filter_initial(pool: np.ndarray, cms) -> np.ndarray:
    if pool.size == 0:
        return pool
    bad = np.zeros(pool.shape, dtype=bool)
    n = len(cms)
    for a in range(n):
        ca = cms[a]
        ia = pool & np.uint32(ca)
        for b in range(a + 1, n):
            bad |= (np.uint32(ca & cms[b]) & ~pool) == 0
        for w in range(n):
            if w != a:
                bad |= (ia & _inv32(cms[w])) == 0
    return pool[~bad]


def _filter_after(pool: np.ndarray, c: int, cms, isf: int) -> np.ndarray:
    if pool.size == 0:
        return pool
    bad = (pool & np.uint32(isf)) != 0
    bad |= pool == c
    ic = pool & np.uint32(c)
    inv_c = _inv32(c)
    for u in cms:
        bad |= (np.uint32(u & c) & ~pool) == 0
        bad |= (ic & _inv32(u)) == 0
        bad |= ((pool & np.uint32(u)) & inv_c) == 0
    return pool[~bad]


# ---------------------------------------------------------------------------
# the recursion

class _Abort(Exception):
    pass


_EMPTY_POOL = np.empty(0, dtype=np.uint32)


class _RunState:
    __slots__ = ("nodes", "budget", "deadline")

    def __init__(self, budget, deadline):
        self.nodes = 0
        self.budget = budget
        self.deadline = deadline

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Abort()
        if self.deadline is not None and self.nodes & 1023 == 0:
            if time.monotonic() > self.deadline:
                raise _Abort()


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _rows_antichain(bits) -> bool:
    k = len(bits)
    for i in range(k):
        bi = bits[i]
        for j in range(k):
            if i != j and bi & ~bits[j] == 0:
                return False
    return True


def _compaction_table(bits):
    """tab[i][r] = row r restricted to row i's support, compacted.

    Extracting row i's facet then only needs the maximal entries of tab[i].
    The table updates incrementally: appending column c shifts tab[i] left
    by one and ors in c's bits, for exactly the rows i that gained c.
    """
    k = len(bits)
    tab = []
    for i in range(k):
        shifts = []
        x = bits[i]
        while x:
            hb = x.bit_length() - 1
            shifts.append(hb)
            x ^= 1 << hb
        row_tab = []
        for r in range(k):
            v = 0
            rr = bits[r]
            for sh in shifts:
                v = (v << 1) | ((rr >> sh) & 1)
            row_tab.append(v)
        tab.append(row_tab)
    return tab


def _bump_table(tab, c: int, rows_c):
    out = tab.copy()
    k = len(tab)
    for i in rows_c:
        ti = tab[i]
        out[i] = [(ti[r] << 1) | ((c >> r) & 1) for r in range(k)]
    return out


def _keep_maximal(vals, skip: int):
    # maximal restrictions in original order, first occurrence among equals
    keep = []
    n = len(vals)
    for a in range(n):
        if a == skip:
            continue
        ra = vals[a]
        for b in range(n):
            if b == skip or b == a:
                continue
            rb = vals[b]
            if ra & ~rb == 0 and (ra != rb or b < a):
                break
        else:
            keep.append(ra)
    return keep


_BATCH_MIN = 48


def _confirm_batch(ctx, bits, tab, pool: np.ndarray) -> np.ndarray:
    """Confirmation bits for every candidate column at once.

    Returns, per candidate c, the or-mask of rows whose facet extraction
    from the matrix grown by c matches the index.  The dominance scan runs
    vectorized across the pool; only candidates whose kept-row count hits a
    member shape fall back to a real membership lookup.
    """
    k = len(bits)
    ncand = pool.shape[0]
    add = np.zeros(ncand, np.uint32)
    one = np.uint32(1)
    rowbit = [(pool >> np.uint32(r)) & one for r in range(k)]
    T = np.empty((k, ncand), np.uint32)
    for i in range(k):
        pc = bits[i].bit_count() + 1
        if pc not in ctx.member_cols:
            continue
        att = rowbit[i] != 0
        if not att.any():
            continue
        ti = tab[i]
        for r in range(k):
            T[r] = np.uint32(ti[r] << 1) | rowbit[r]
        dom = np.zeros((k, ncand), bool)
        for a in range(k):
            if a == i:
                continue
            Ta = T[a]
            for b in range(k):
                if b == i or b == a:
                    continue
                sub = (Ta & ~T[b]) == 0
                if b < a:
                    dom[a] |= sub
                else:
                    dom[a] |= sub & (Ta != T[b])
        keepct = k - 1 - dom.sum(axis=0)
        plaus = att & np.isin(keepct, ctx.member_rows_arr[pc])
        for idx in np.nonzero(plaus)[0]:
            col = T[:, idx]
            di = dom[:, idx]
            keep = [int(col[r]) for r in range(k) if r != i and not di[r]]
            if ctx.index.contains_packed(pc, keep):
                add[idx] |= np.uint32(1 << i)
    return add


def _permute_stub(x: int, perm, n: int) -> int:
    y = 0
    for j, p in enumerate(perm):
        if (x >> (n - 1 - p)) & 1:
            y |= 1 << (n - 1 - j)
    return y


class _Context:
    """Per-spec immutable search state, built once and reused across units."""

    def __init__(self, spec: CampaignSpec):
        self.spec = spec
        F = spec.base_facet
        self.base_bits = list(F.bits)
        self.nB = F.cols
        self.m = spec.fct - F.rows - 1
        self.min_ones = spec.dim - (spec.vrt - F.cols)
        self.feas_rows = gen_feasible_rows(F, self.min_ones)
        # base symmetries act on row stubs; only the orbit-minimal multiset
        # of each unit orbit is searched, the twins being isomorphic
        self.aut_tables = []
        if self.m and len(self.feas_rows) > 1:
            seen = set()
            for g in column_automorphisms(F):
                t = tuple(_permute_stub(x, g, F.cols) for x in self.feas_rows)
                if t not in seen:
                    seen.add(t)
                    if any(a != b for a, b in zip(t, self.feas_rows)):
                        self.aut_tables.append(dict(zip(self.feas_rows, t)))
        if self.m:
            self.total_units = math.comb(len(self.feas_rows) + self.m - 1, self.m)
        else:
            self.total_units = 1
        self.index = build_index(spec.facet_list)
        self.member_cols = {A.cols for A in spec.facet_list}
        self.member_rows_arr = {
            n: np.array(
                sorted({A.rows for A in spec.facet_list if A.cols == n}),
                dtype=np.int64,
            )
            for n in self.member_cols
        }
        self.base_2n = is_two_neighborly(F)
        self.full = (1 << spec.fct) - 1
        self.pool0 = np.array(_raw_columns(spec.fct, spec.minfv), dtype=np.uint32)
        self.min_pc = min(self.member_cols)
        self.max_pc = max(self.member_cols)

    def units(self, lo: int, hi: int):
        return islice(
            combinations_with_replacement(self.feas_rows, self.m), lo, hi
        )


def _unfrozen_viable(ctx, bits, isf, remaining):
    """Bounds every accepted descendant must respect, cheap enough per node.

    A row not yet confirmed as a facet still has to grow into one: it must
    sit strictly below the largest member vertex count, reach the smallest
    within the columns left, and the unconfirmed rows together must be able
    to absorb at least minfv ones for every remaining column.
    """
    gain = 0
    mx, mn = ctx.max_pc, ctx.min_pc
    for i, r in enumerate(bits):
        if (isf >> i) & 1:
            continue
        p = r.bit_count()
        if p >= mx or p + remaining < mn:
            return False
        gain += mx - p
    return gain >= remaining * ctx.spec.minfv


def _grow(ctx, bits, width, cms, pool, isf, remaining, tab, out, state):
    spec = ctx.spec
    if remaining == 1:
        state.tick()
        c = ~isf & ctx.full
        if c.bit_count() < spec.minfv:
            return
        if not _append_keeps(cms, c):
            return
        nb = [(r << 1) | ((c >> i) & 1) for i, r in enumerate(bits)]
        if not _rows_antichain(nb):
            return
        rows_c = list(_iter_bits(c))
        tab2 = _bump_table(tab, c, rows_c)
        for i in rows_c:
            pc = nb[i].bit_count()
            if pc not in ctx.member_cols:
                return
            if not ctx.index.contains_packed(pc, _keep_maximal(tab2[i], i)):
                return
        form = canonical_form(IncidenceMatrix(width + 1, nb))
        out[(form.rows, form.cols, form.bits)] = form
        return
    if pool.size == 0:
        return
    adds = _confirm_batch(ctx, bits, tab, pool) if pool.size >= _BATCH_MIN else None
    mx = ctx.max_pc
    for idx, c in enumerate(pool.tolist()):
        state.tick()
        nb = [(r << 1) | ((c >> i) & 1) for i, r in enumerate(bits)]
        rows_c = list(_iter_bits(c))
        if any(nb[i].bit_count() > mx for i in rows_c):
            continue
        tab2 = _bump_table(tab, c, rows_c)
        if adds is not None:
            isf2 = isf | int(adds[idx])
        else:
            isf2 = isf
            for i in rows_c:
                pc = nb[i].bit_count()
                if pc in ctx.member_cols:
                    if ctx.index.contains_packed(pc, _keep_maximal(tab2[i], i)):
                        isf2 |= 1 << i
        if not _unfrozen_viable(ctx, nb, isf2, remaining - 1):
            continue
        # the forced level never reads the pool, so skip filtering for it
        if remaining == 2:
            pool2 = _EMPTY_POOL
        else:
            pool2 = _filter_after(pool, c, cms, isf2)
        _grow(ctx, nb, width + 1, cms + [c], pool2, isf2, remaining - 1, tab2, out, state)


def _search_unit(ctx, S, out, state):
    spec = ctx.spec
    nB = ctx.nB
    for t in ctx.aut_tables:
        if tuple(sorted(t[x] for x in S)) < S:
            return
    bits = ctx.base_bits + list(S) + [(1 << nB) - 1]
    cms = []
    for j in range(nB):
        sh = nB - 1 - j
        col = 0
        for i, r in enumerate(bits):
            col |= ((r >> sh) & 1) << i
        cms.append(col)
    # columns over the base vertices cannot gain ones later
    if any(col.bit_count() < spec.minfv for col in cms):
        return
    # a flaw among the starting columns can never be repaired; when the
    # base facet is itself 2-neighborly the extra rows cannot introduce one
    if not ctx.base_2n and not _cols_two_neighborly(cms):
        return
    if not _unfrozen_viable(ctx, bits, 1 << (spec.fct - 1), spec.vrt - nB):
        return
    pool = _filter_initial(ctx.pool0, cms)
    tab = _compaction_table(bits)
    _grow(
        ctx, bits, nB, cms, pool, 1 << (spec.fct - 1), spec.vrt - nB, tab, out, state
    )


def _search_range(ctx, lo, hi, budget, deadline):
    """Run units lo..hi-1, returning (sorted forms, nodes, aborted unit)."""
    out: dict = {}
    state = _RunState(budget, deadline)
    u = lo
    aborted = None
    try:
        for S in ctx.units(lo, hi):
            _search_unit(ctx, S, out, state)
            u += 1
    except _Abort:
        aborted = u
    forms = [out[k] for k in sorted(out)]
    return forms, state.nodes, aborted


def find_matrices(spec: CampaignSpec, max_nodes=None, max_seconds=None):
    """All 2-neighborly matrices for the spec, canonized, sorted, deduped.

    Raises ResourceAbort, carrying partial results and the next multisubset
    index, when a budget runs out.
    """
    ctx = _Context(spec)
    deadline = time.monotonic() + max_seconds if max_seconds else None
    forms, nodes, aborted = _search_range(ctx, 0, ctx.total_units, max_nodes, deadline)
    if aborted is not None:
        raise ResourceAbort(forms, 0, aborted, nodes)
    return forms


# ---------------------------------------------------------------------------
# campaign runner with optional worker pool

@dataclass(frozen=True)
class CampaignOutcome:
    matrices: tuple[IncidenceMatrix, ...]
    nodes: int
    completed: bool
    position: tuple[int, int] | None  # (spec index, unit) to resume from
    total_units: tuple[int, ...]


_POOL_SPECS: list = []
_POOL_CTX: dict = {}


def _pool_init(specs):
    _POOL_SPECS.clear()
    _POOL_SPECS.extend(specs)
    _POOL_CTX.clear()


def _pool_task(args):
    si, lo, hi, budget, deadline = args
    ctx = _POOL_CTX.get(si)
    if ctx is None:
        ctx = _POOL_CTX[si] = _Context(_POOL_SPECS[si])
    forms, nodes, aborted = _search_range(ctx, lo, hi, budget, deadline)
    packed = [(f.cols, f.bits) for f in forms]
    return packed, nodes, aborted


def _merge(found: dict, forms) -> None:
    for f in forms:
        found[(f.rows, f.cols, f.bits)] = f


def run_campaign(
    specs,
    workers: int = 1,
    max_nodes=None,
    max_seconds=None,
    start: tuple[int, int] = (0, 0),
    seed=(),
) -> CampaignOutcome:
    """Run every spec in order, merging results deterministically.

    The multisubset loop is what gets distributed: each worker owns a
    contiguous unit range and its own recursion state, and the merged
    output is sorted by canonical form, so any worker count yields
    byte-identical results.  `start` and `seed` let a checkpointed run
    resume.  When a budget runs out the outcome records the exact (spec,
    unit) position to resume from.
    """
    deadline = time.monotonic() + max_seconds if max_seconds else None
    found: dict = {}
    for f in seed:
        _merge(found, [canonical_form(f)])
    nodes = 0
    totals = []
    ctxs = [None] * len(specs)

    def ctx_at(i):
        if ctxs[i] is None:
            ctxs[i] = _Context(specs[i])
        return ctxs[i]

    position = None
    for i in range(len(specs)):
        totals.append(ctx_at(i).total_units)
    si, u0 = start
    for i in range(si, len(specs)):
        ctx = ctx_at(i)
        lo = u0 if i == si else 0
        budget = None if max_nodes is None else max_nodes - nodes
        if budget is not None and budget <= 0:
            position = (i, lo)
            break
        if workers <= 1 or ctx.total_units - lo <= 1:
            forms, n, aborted = _search_range(ctx, lo, ctx.total_units, budget, deadline)
            _merge(found, forms)
            nodes += n
        else:
            aborted = None
            chunk = max(1, math.ceil((ctx.total_units - lo) / (workers * 8)))
            tasks = [
                (i, a, min(a + chunk, ctx.total_units), budget, deadline)
                for a in range(lo, ctx.total_units, chunk)
            ]
            mp = get_context("fork")
            with mp.Pool(workers, initializer=_pool_init, initargs=(specs,)) as pool:
                for packed, n, ab in pool.imap(_pool_task, tasks):
                    _merge(found, [IncidenceMatrix(c, b) for c, b in packed])
                    nodes += n
                    if ab is not None:
                        aborted = ab
                        pool.terminate()
                        break
        if aborted is not None:
            position = (i, aborted)
            break
    mats = tuple(found[k] for k in sorted(found))
    return CampaignOutcome(mats, nodes, position is None, position, tuple(totals))


# ---------------------------------------------------------------------------
# star completion: block isomorphism instead of column growth

@dataclass(frozen=True)
class StarCompletion:
    matrix: IncidenceMatrix
    saturated_row: int
    two_neighborly: bool
    violations: tuple
    facet_failures: tuple  # (row, extracted rows, extracted cols)

    @property
    def accepted(self) -> bool:
        return self.two_neighborly and not self.violations and not self.facet_failures


@dataclass(frozen=True)
class StarResult:
    completions: tuple
    accepted: tuple


def _matchings(cand, limit=200000):
    """Every bijection row t -> bit r with r in cand[t], as index tuples."""
    k = len(cand)
    out = []
    assign = [-1] * k
    rows = set(range(k))

    def rec(used):
        if len(out) > limit:
            raise RuntimeError("too many row matchings")
        if not rows:
            out.append(tuple(assign))
            return
        t = min(rows, key=lambda q: (cand[q] & ~used).bit_count())
        opts = cand[t] & ~used
        rows.discard(t)
        while opts:
            low = opts & -opts
            opts ^= low
            assign[t] = low.bit_length() - 1
            rec(used | low)
        assign[t] = -1
        rows.add(t)

    rec(0)
    return out


def _star_blocks(B: IncidenceMatrix, r_star: int, new: int):
    """All fillings of the unknown block so that row r_star extracts to B.

    Template rows are B's rows minus r_star plus the all-ones base row;
    their entries over r_star's support are known, the entries under the
    new vertices are unknown except that the base row has none.  Each
    (row, column) bijection onto B that respects the knowns determines the
    unknowns, giving one completed matrix.
    """
    k, n = B.rows, B.cols
    fullk = (1 << k) - 1
    sup = [j for j in range(n) if B.entry(r_star, j)]
    trows = [i for i in range(k) if i != r_star]
    bcol = []
    for c in range(n):
        mask = 0
        for r in range(k):
            mask |= B.entry(r, c) << r
        bcol.append(mask)
    tcols = []
    for j in sup:
        mask = 1 << (k - 1)  # the base row is on every vertex of the support
        for t, i in enumerate(trows):
            mask |= B.entry(i, j) << t
        tcols.append(mask)

    used = [False] * n
    psi: list[int] = []
    results = []

    def dfs(t, cand):
        if t == len(sup):
            rest = [c for c in range(n) if not used[c]]
            allowed = fullk
            for c in rest:
                allowed &= ~bcol[c] & fullk
            cand2 = list(cand)
            cand2[k - 1] &= allowed  # base row gains no new vertices
            if 0 in cand2:
                return
            for rho in _matchings(cand2):
                if len(set(rho)) == k:
                    results.append((tuple(rho), rest))
            return
        pat = tcols[t]
        for c in range(n):
            if used[c]:
                continue
            ones = bcol[c]
            nxt = []
            union = 0
            for u in range(k):
                cu = cand[u] & (ones if (pat >> u) & 1 else ~ones & fullk)
                if cu == 0:
                    break
                nxt.append(cu)
                union |= cu
            else:
                if union.bit_count() >= k:
                    used[c] = True
                    psi.append(c)
                    dfs(t + 1, nxt)
                    psi.pop()
                    used[c] = False

    dfs(0, [fullk] * k)

    mats = []
    seen = set()
    top = (1 << new) - 1
    for rho, rest in results:
        rows_out = []
        for i in range(k):
            if i == r_star:
                rows_out.append((B.bits[i] << new) | top)
                continue
            t = i if i < r_star else i - 1
            star = 0
            for c in rest:
                star = (star << 1) | B.entry(rho[t], c)
            rows_out.append((B.bits[i] << new) | star)
        rows_out.append(((1 << n) - 1) << new)
        key = tuple(rows_out)
        if key not in seen:
            seen.add(key)
            mats.append(IncidenceMatrix(n + new, rows_out))
    return mats


def solve_star_completion(spec: CampaignSpec) -> StarResult:
    """Complete the base facet's own matrix to the full target shape.

    Used when every unknown entry sits in one block: the target has
    exactly the base's facets plus the base itself, and some facet must
    carry all the new vertices while replicating the base's matrix.  The
    completions are then judged by the usual acceptance checks; failures
    are reported, not silently dropped, since the interesting outcome is
    exactly which check kills a completion.
    """
    B = spec.base_facet
    if spec.fct != B.rows + 1:
        raise ValueError("star mode needs fct == rows(base_facet) + 1")
    new = spec.vrt - B.cols
    idx = build_index(spec.facet_list)
    member_cols = {A.cols for A in spec.facet_list}

    completions = []
    seen = set()
    for r_star in range(B.rows):
        if B.bits[r_star].bit_count() != B.cols - new:
            continue
        for M in _star_blocks(B, r_star, new):
            if M.bits in seen:
                continue
            seen.add(M.bits)
            fails = []
            for i in range(M.rows):
                if M.bits[i].bit_count() not in member_cols:
                    A = get_facet(M, i)
                    fails.append((i, A.rows, A.cols))
                    continue
                A = get_facet(M, i)
                if not idx.contains(A):
                    fails.append((i, A.rows, A.cols))
            completions.append(
                StarCompletion(
                    matrix=M,
                    saturated_row=r_star,
                    two_neighborly=is_two_neighborly(M),
                    violations=tuple(validate(M, spec.dim)),
                    facet_failures=tuple(fails),
                )
            )
    accepted = {}
    for comp in completions:
        if comp.accepted:
            _merge(accepted, [canonical_form(comp.matrix)])
    acc = tuple(accepted[k] for k in sorted(accepted))
    return StarResult(tuple(completions), acc)
