"""Graded free modules, graded maps, syzygies and free resolutions.

The engine is a Buchberger algorithm for submodules of free modules with a
position-over-term order, plus Schreyer's theorem for iterated syzygies.
Resolutions are computed non-minimally (Schreyer frames) and minimized
afterwards by stripping constant entries.

A module vector is a dict {(position, exponent tuple): coefficient}.
"""
from __future__ import annotations

import heapq
import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .poly import (
    ComputationError,
    Monomial,
    Polynomial,
    RingContext,
    UsageError,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# free modules and maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedFreeModule:
    """The graded free module sum of S(-a_i); twists lists the a_i."""

    ring: RingContext
    twists: tuple

    @property
    def rank(self) -> int:
        return len(self.twists)

    def component_dim(self, d: int) -> int:
        v = self.ring.nvars
        return sum(comb(d - a + v - 1, v - 1) for a in self.twists if d - a >= 0)

    def component_basis(self, d: int):
        """Basis of the degree-d piece: (generator index, monomial), generator
        index major, monomials descending in the ring order."""
        out = []
        for i, a in enumerate(self.twists):
            for m in self.ring.monomials_of_degree(d - a):
                out.append((i, m))
        return out


def free_module(ring: RingContext, twists: Sequence[int]) -> GradedFreeModule:
    return GradedFreeModule(ring, tuple(twists))


def graded_component_basis(M: GradedFreeModule, d: int):
    return M.component_basis(d)


def _vec_degree(vec: dict, twists) -> int:
    """Total degree of a homogeneous vector; -1 for zero."""
    if not vec:
        return -1
    (pos, m) = next(iter(vec))
    return sum(m) + twists[pos]


def _vec_is_homogeneous(vec: dict, twists) -> bool:
    degs = {sum(m) + twists[pos] for (pos, m) in vec}
    return len(degs) <= 1


class GradedMap:
    """Map between graded free modules, stored column-wise: columns[j] is the
    image of the j-th source generator as a module vector in the target."""

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule,
                 columns: Sequence[dict], validate: bool = False):
        self.source = source
        self.target = target
        self.columns = [dict(c) for c in columns]
        if len(self.columns) != source.rank:
            raise UsageError("column count must match source rank")
        if validate:
            self.validate()

    @property
    def ring(self) -> RingContext:
        return self.source.ring

    def validate(self):
        for j, col in enumerate(self.columns):
            for (i, m), c in col.items():
                want = self.source.twists[j] - self.target.twists[i]
                if sum(m) != want:
                    raise UsageError(
                        f"entry ({i},{j}) has degree {sum(m)}, expected {want}")

    def entry(self, i: int, j: int) -> Polynomial:
        terms = {m: c for (pos, m), c in self.columns[j].items() if pos == i}
        return Polynomial(self.ring, terms)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def transpose(self) -> "GradedMap":
        """The dual map Hom(target, S) -> Hom(source, S); twists negate."""
        src = GradedFreeModule(self.ring, tuple(-a for a in self.target.twists))
        tgt = GradedFreeModule(self.ring, tuple(-a for a in self.source.twists))
        cols = [dict() for _ in range(src.rank)]
        for j, col in enumerate(self.columns):
            for (i, m), c in col.items():
                cols[i][(j, m)] = c
        return GradedMap(src, tgt, cols)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other (other's target is self's source)."""
        p = self.ring.field.modulus
        cols = []
        for col in other.columns:
            out = {}
            for (j, m), c in col.items():
                for (i, m2), c2 in self.columns[j].items():
                    key = (i, mono_mul(m, m2))
                    val = (out.get(key, 0) + c * c2) % p
                    if val:
                        out[key] = val
                    elif key in out:
                        del out[key]
            cols.append(out)
        return GradedMap(other.source, self.target, cols)


_DENSE_RANK_CELLS = 4_000_000


def map_rank_in_degree(phi: GradedMap, d: int) -> int:
    """Rank over the prime field of the degree-d component of phi."""
    tgt_basis = phi.target.component_basis(d)
    src_basis = phi.source.component_basis(d)
    if not tgt_basis or not src_basis:
        return 0
    index = {t: k for k, t in enumerate(tgt_basis)}
    col_of_gen = {}
    for k, (j, m) in enumerate(src_basis):
        col_of_gen.setdefault(j, []).append((k, m))
    if len(tgt_basis) * len(src_basis) > _DENSE_RANK_CELLS:
        # large components: assemble sparse columns instead of a dense array
        cols = [dict() for _ in range(len(src_basis))]
        for j, col in enumerate(phi.columns):
            if not col or j not in col_of_gen:
                continue
            for k, m in col_of_gen[j]:
                for (i, me), c in col.items():
                    cols[k][index[(i, mono_mul(me, m))]] = c
        return linalg.sparse_rank_mod_p(cols, phi.ring.field.modulus)
    mat = np.zeros((len(tgt_basis), len(src_basis)), dtype=np.int64)
    for j, col in enumerate(phi.columns):
        if not col or j not in col_of_gen:
            continue
        for k, m in col_of_gen[j]:
            for (i, me), c in col.items():
                mat[index[(i, mono_mul(me, m))], k] = c
    return linalg.rank_mod_p(mat, phi.ring.field.modulus)


# ---------------------------------------------------------------------------
# module term orders
# ---------------------------------------------------------------------------


class ModuleOrder:
    def key(self, term):
        raise NotImplementedError


class PotOrder(ModuleOrder):
    """Position over term: generator 0 largest, ties by the ring order."""

    def __init__(self, term_order):
        self.term_order = term_order

    def key(self, term):
        pos, m = term
        return (-pos, self.term_order.key(m))


class SchreyerOrder(ModuleOrder):
    """Induced order: compare images of terms under the map sending the i-th
    generator to a vector with leading term images[i]; ties by position."""

    def __init__(self, below: ModuleOrder, images: Sequence[tuple]):
        self.below = below
        self.images = list(images)  # (position below, monomial below)
        self._cache = {}

    def key(self, term):
        k = self._cache.get(term)
        if k is None:
            pos, m = term
            ip, im = self.images[pos]
            k = (self.below.key((ip, mono_mul(m, im))), -pos)
            self._cache[term] = k
        return k


# ---------------------------------------------------------------------------
# module division and Buchberger
# ---------------------------------------------------------------------------


def _vec_lt(vec: dict, order: ModuleOrder):
    return max(vec, key=order.key)


class _MaxKey:
    """Reverses comparison so heapq's min-heap pops the largest key first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k


def reduction_index(basis):
    """Divisor lookup reused across many divisions by the same basis:
    {leading position: [(basis index, tail terms, leading monomial)]}.
    Callers that grow the basis append entries with index_add."""
    by_pos = {}
    for bi, (g, lt) in enumerate(basis):
        index_add(by_pos, bi, g, lt)
    return by_pos


def index_add(by_pos, bi, g, lt):
    tail = [(t, c) for t, c in g.items() if t != lt]
    by_pos.setdefault(lt[0], []).append((bi, tail, lt[1]))


def module_reduce(vec: dict, basis, order: ModuleOrder, p: int,
                  with_quotients: bool = False, index=None):
    """Full division of vec by basis (list of (vector, leading term) with
    monic leading coefficients).  Optionally track the quotients.

    Terms are visited largest-first through a lazy max-heap: cancelling a
    term only creates strictly smaller terms, so popped terms never
    reappear and stale heap entries can simply be skipped."""
    work = dict(vec)
    remainder = {}
    key = order.key
    quotients = [dict() for _ in basis] if with_quotients else None
    by_pos = reduction_index(basis) if index is None else index
    heap = [(_MaxKey(key(t)), t) for t in work]
    heapq.heapify(heap)
    push = heapq.heappush
    work_get = work.get
    while heap:
        term = heapq.heappop(heap)[1]
        if term not in work:
            continue
        pos, m = term
        c = work.pop(term)
        reduced = False
        for bi, tail, lm in by_pos.get(pos, ()):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                if with_quotients:
                    quotients[bi][q] = (quotients[bi].get(q, 0) + c) % p
                for (gp, gm), gc in tail:
                    t2 = (gp, mono_mul(gm, q))
                    prev = work_get(t2)
                    c2 = ((prev if prev is not None else 0) - c * gc) % p
                    if c2:
                        work[t2] = c2
                        if prev is None:
                            push(heap, (_MaxKey(key(t2)), t2))
                    elif prev is not None:
                        del work[t2]
                reduced = True
                break
        if not reduced:
            remainder[term] = c
    if with_quotients:
        return remainder, quotients
    return remainder


def _vec_monic(vec: dict, lt, p: int):
    c = vec[lt]
    if c == 1:
        return vec
    inv = pow(c, p - 2, p)
    return {t: v * inv % p for t, v in vec.items()}


def module_gb(cols: Sequence[dict], order: ModuleOrder, ring: RingContext,
              twists=None, transform: bool = False):
    """Reduced Groebner basis of the submodule generated by cols.

    Returns (basis, tails) where basis is a list of (vector, leading term)
    with monic leads, and tails[k] expresses basis[k] as a combination of the
    original columns (dict {(col index, monomial): coeff}) when transform is
    requested, else None.

    The product criterion is not used: it is invalid for modules."""
    p = ring.field.modulus
    key = order.key
    basis = []  # (vec, lt)
    tails = [] if transform else None

    def reduce_and_add(vec, tail):
        if transform:
            rem, quots = module_reduce(vec, basis, order, p, with_quotients=True)
            for bi, q in enumerate(quots):
                for m, c in q.items():
                    for (cj, tm), tc in tails[bi].items():
                        t2 = (cj, mono_mul(tm, m))
                        c2 = (tail.get(t2, 0) - c * tc) % p
                        if c2:
                            tail[t2] = c2
                        elif t2 in tail:
                            del tail[t2]
        else:
            rem = module_reduce(vec, basis, order, p)
        if not rem:
            return None
        lt = _vec_lt(rem, order)
        lc = rem[lt]
        rem = _vec_monic(rem, lt, p)
        if transform:
            inv = pow(lc, p - 2, p)
            tail = {t: c * inv % p for t, c in tail.items()}
            tails.append(tail)
        basis.append((rem, lt))
        return len(basis) - 1

    seeds = sorted(
        range(len(cols)),
        key=lambda j: key(_vec_lt(cols[j], order)) if cols[j] else ((), 0),
    )
    pairs = []  # heap: (degree of S-pair, tiebreak, i, j)

    def push_pairs(jnew):
        vj, ltj = basis[jnew]
        for i in range(jnew):
            vi, lti = basis[i]
            if lti[0] != ltj[0]:
                continue
            lcm = mono_lcm(lti[1], ltj[1])
            heapq.heappush(pairs, (sum(lcm), lti[0], lcm, i, jnew))

    for j in seeds:
        if cols[j]:
            reduce_and_add(dict(cols[j]), {(j, ring.zero_mono()): 1} if transform else None)
    n0 = len(basis)
    for j in range(n0):
        push_pairs(j)

    processed = set()
    handled = 0
    while pairs:
        handled += 1
        if handled % 2000 == 0:
            log.debug("module_gb: %d pairs handled, basis %d, queue %d",
                      handled, len(basis), len(pairs))
        _, pos, lcm, i, j = heapq.heappop(pairs)
        vi, lti = basis[i]
        vj, ltj = basis[j]
        if mono_lcm(lti[1], ltj[1]) != lcm:
            continue
        # chain criterion
        skip = False
        for k, (vk, ltk) in enumerate(basis):
            if k in (i, j) or ltk[0] != pos:
                continue
            if mono_divides(ltk[1], lcm):
                if (tuple(sorted((i, k))) in processed
                        and tuple(sorted((k, j))) in processed):
                    skip = True
                    break
        processed.add((i, j))
        if skip:
            continue
        ui = mono_div(lcm, lti[1])
        uj = mono_div(lcm, ltj[1])
        svec = {}
        for t, c in vi.items():
            svec[(t[0], mono_mul(t[1], ui))] = c
        for t, c in vj.items():
            t2 = (t[0], mono_mul(t[1], uj))
            c2 = (svec.get(t2, 0) - c) % p
            if c2:
                svec[t2] = c2
            elif t2 in svec:
                del svec[t2]
        tail = None
        if transform:
            tail = {}
            for (cj, tm), tc in tails[i].items():
                tail[(cj, mono_mul(tm, ui))] = tc
            for (cj, tm), tc in tails[j].items():
                t2 = (cj, mono_mul(tm, uj))
                c2 = (tail.get(t2, 0) - tc) % p
                if c2:
                    tail[t2] = c2
                elif t2 in tail:
                    del tail[t2]
        new = reduce_and_add(svec, tail)
        if new is not None:
            push_pairs(new)

    return _module_interreduce(basis, tails, order, ring)


def _module_interreduce(basis, tails, order, ring):
    p = ring.field.modulus
    keep = []
    for i, (g, lt) in enumerate(basis):
        redundant = False
        for j, (h, lth) in enumerate(basis):
            if i == j or lt[0] != lth[0]:
                continue
            if mono_divides(lth[1], lt[1]) and (lth != lt or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    out = []
    out_tails = [] if tails is not None else None
    for i in keep:
        g, lt = basis[i]
        others = [basis[k] for k in keep if k != i]
        if tails is not None:
            rem, quots = module_reduce(g, others, order, p, with_quotients=True)
            tail = dict(tails[i])
            qi = 0
            for k in keep:
                if k == i:
                    continue
                for m, c in quots[qi].items():
                    for (cj, tm), tc in tails[k].items():
                        t2 = (cj, mono_mul(tm, m))
                        c2 = (tail.get(t2, 0) - c * tc) % p
                        if c2:
                            tail[t2] = c2
                        elif t2 in tail:
                            del tail[t2]
                qi += 1
        else:
            rem = module_reduce(g, others, order, p)
            tail = None
        if not rem:
            continue
        lt2 = _vec_lt(rem, order)
        lc = rem[lt2]
        rem = _vec_monic(rem, lt2, p)
        if tail is not None:
            inv = pow(lc, p - 2, p)
            tail = {t: c * inv % p for t, c in tail.items()}
            out_tails.append(tail)
        out.append((rem, lt2))
    pairs = sorted(range(len(out)), key=lambda k: order.key(out[k][1]))
    out2 = [out[k] for k in pairs]
    tails2 = [out_tails[k] for k in pairs] if out_tails is not None else None
    return out2, tails2


# ---------------------------------------------------------------------------
# Schreyer syzygies
# ---------------------------------------------------------------------------


def schreyer_step(basis, order: ModuleOrder, ring: RingContext):
    """One Schreyer syzygy step on a Groebner basis (list of (vec, lt) with
    monic leads).  Returns (syzygy vectors over the basis, their leading
    terms, the induced order for the next level).

    For each i the leading syzygy terms lcm/lm_i on generator i (partners
    j > i with the same leading position) are pruned to the minimal
    generators of the corresponding monomial ideal."""
    p = ring.field.modulus
    lts = [lt for (_, lt) in basis]
    next_order = SchreyerOrder(order, lts)
    taus = []
    by_pos = {}
    for k, lt in enumerate(lts):
        by_pos.setdefault(lt[0], []).append(k)
    for pos, idxs in sorted(by_pos.items()):
        for a, i in enumerate(idxs):
            lmi = lts[i][1]
            cands = []
            for j in idxs[a + 1:]:
                lcm = mono_lcm(lmi, lts[j][1])
                cands.append((mono_div(lcm, lmi), j, lcm))
            cands.sort(key=lambda t: (sum(t[0]), t[0], t[1]))
            kept = []
            for u, j, lcm in cands:
                if any(mono_divides(u0, u) for u0, _, _ in kept):
                    continue
                kept.append((u, j, lcm))
            for u, j, lcm in kept:
                uj = mono_div(lcm, lts[j][1])
                svec = {}
                for t, c in basis[i][0].items():
                    svec[(t[0], mono_mul(t[1], u))] = c
                for t, c in basis[j][0].items():
                    t2 = (t[0], mono_mul(t[1], uj))
                    c2 = (svec.get(t2, 0) - c) % p
                    if c2:
                        svec[t2] = c2
                    elif t2 in svec:
                        del svec[t2]
                rem, quots = module_reduce(svec, basis, order, p, with_quotients=True)
                if rem:
                    raise ComputationError("S-vector of a Groebner basis did not reduce to zero")
                tau = {(i, u): 1, (j, uj): (-1) % p}
                for k, q in enumerate(quots):
                    for m, c in q.items():
                        t2 = (k, m)
                        c2 = (tau.get(t2, 0) - c) % p
                        if c2:
                            tau[t2] = c2
                        elif t2 in tau:
                            del tau[t2]
                taus.append((tau, (i, u)))
    return taus, next_order


# ---------------------------------------------------------------------------
# syzygies of an arbitrary map
# ---------------------------------------------------------------------------


def syzygies(phi: GradedMap) -> GradedMap:
    """Kernel of phi as a map onto it: columns generate {v : phi(v) = 0}.

    Combines the leading syzygies of a transformed Groebner basis with the
    expressions of the reduced input columns, then interreduces for a
    deterministic answer."""
    rc = phi.ring
    p = rc.field.modulus
    order = PotOrder(rc.order)
    cols = phi.columns
    nz = [j for j, c in enumerate(cols) if c]
    raw = []
    for j, col in enumerate(cols):
        if not col:
            raw.append({(j, rc.zero_mono()): 1})
    if nz:
        log.debug("syzygies: GB of %d columns (transform on)", len(nz))
        gb, tails = module_gb([cols[j] for j in nz], order, rc, transform=True)
        log.debug("syzygies: GB size %d", len(gb))
        # re-index tails back to original column positions
        tails = [{(nz[cj], m): c for (cj, m), c in t.items()} for t in tails]
        taus, _ = schreyer_step(gb, order, rc)
        for tau, _lt in taus:
            vec = {}
            for (k, m), c in tau.items():
                for (cj, tm), tc in tails[k].items():
                    t2 = (cj, mono_mul(tm, m))
                    c2 = (vec.get(t2, 0) + c * tc) % p
                    if c2:
                        vec[t2] = c2
                    elif t2 in vec:
                        del vec[t2]
            if vec:
                raw.append(vec)
        # e_j minus an expression of column j via the basis is also a syzygy
        for j in nz:
            rem, quots = module_reduce(dict(cols[j]), gb, order, p, with_quotients=True)
            if rem:
                continue
            vec = {(j, rc.zero_mono()): 1}
            for k, q in enumerate(quots):
                for m, c in q.items():
                    for (cj, tm), tc in tails[k].items():
                        t2 = (cj, mono_mul(tm, m))
                        c2 = (vec.get(t2, 0) - c * tc) % p
                        if c2:
                            vec[t2] = c2
                        elif t2 in vec:
                            del vec[t2]
            if vec:
                raw.append(vec)
    if raw:
        log.debug("syzygies: interreducing %d raw kernel generators", len(raw))
        # deterministic cleanup by mutual division; a full Groebner pass here
        # is wasted work (consumers recompute bases in smaller quotients)
        raw = [_vec_monic(v, _vec_lt(v, order), p) for v in raw]
        raw.sort(key=lambda v: order.key(_vec_lt(v, order)))
        kept = []
        for vec in raw:
            rem = module_reduce(vec, kept, order, p)
            if rem:
                lt = _vec_lt(rem, order)
                kept.append((_vec_monic(rem, lt, p), lt))
        vecs = [g for g, _ in kept]
        log.debug("syzygies: kernel generators after interreduction %d", len(vecs))
    else:
        vecs = []
    src = free_module(rc, [_vec_degree(v, phi.source.twists) for v in vecs])
    return GradedMap(src, phi.source, vecs)


# ---------------------------------------------------------------------------
# presented modules and resolutions
# ---------------------------------------------------------------------------


class PresentedModule:
    """Cokernel of a graded map between free modules.

    base_ideal, when set, records that the module is the coordinate ring of
    that ideal (used to give the 0-th exterior power its structure-sheaf
    meaning)."""

    def __init__(self, presentation: GradedMap, base_ideal=None):
        self.presentation = presentation
        self.base_ideal = base_ideal
        self._res_state = None
        self._min_complex = None
        self._level_min = {}

    @property
    def ring(self) -> RingContext:
        return self.presentation.ring

    @property
    def generators(self) -> GradedFreeModule:
        return self.presentation.target

    def component_dim(self, d: int) -> int:
        return self.generators.component_dim(d) - map_rank_in_degree(self.presentation, d)

    def is_free(self) -> bool:
        return self.presentation.is_zero()


def presented_from_ideal(I) -> PresentedModule:
    """S/I as a presented module (generators: the reduced GB of I)."""
    rc = I.ring
    gb = I.groebner_basis()
    tgt = free_module(rc, [0])
    src = free_module(rc, [g.degree() for g in gb])
    cols = [{(0, m): c for m, c in g.terms.items()} for g in gb]
    return PresentedModule(GradedMap(src, tgt, cols), base_ideal=I)


def free_presented(ring: RingContext, twists: Sequence[int]) -> PresentedModule:
    tgt = free_module(ring, twists)
    src = free_module(ring, [])
    return PresentedModule(GradedMap(src, tgt, []))


@dataclass
class FreeResolution:
    """Chain F_len -> ... -> F_1 -> F_0 with maps[i] : F_{i+1-1}... maps[0]
    is d_1 : F_1 -> F_0.  Minimized (no constant entries) unless stated."""

    maps: list
    f0: GradedFreeModule = None
    capped: bool = False

    @property
    def length(self) -> int:
        return len(self.maps)

    def module(self, i: int) -> GradedFreeModule:
        if i == 0:
            return self.maps[0].target if self.maps else self.f0
        if i > len(self.maps):
            return None
        return self.maps[i - 1].source

    def betti(self) -> dict:
        """{step: sorted [(twist, multiplicity)]}."""
        out = {}
        mods = [self.module(0)] + [m.source for m in self.maps]
        for i, mod in enumerate(mods):
            counts = {}
            for a in mod.twists:
                counts[a] = counts.get(a, 0) + 1
            out[i] = sorted(counts.items())
        return out

    def betti_json(self) -> dict:
        return {str(i): rows for i, rows in self.betti().items()}

    def betti_text(self) -> str:
        """Conventional staircase: rows indexed by twist - step."""
        b = self.betti()
        steps = sorted(b)
        rows = set()
        for i in steps:
            for a, _ in b[i]:
                rows.add(a - i)
        if not rows:
            return "(zero module)"
        lines = ["    " + "".join(f"{i:>8}" for i in steps)]
        total = {i: sum(n for _, n in b[i]) for i in steps}
        lines.append("tot " + "".join(f"{total[i]:>8}" for i in steps))
        for r in sorted(rows):
            cells = []
            for i in steps:
                n = dict(b[i]).get(r + i, 0)
                cells.append(f"{n if n else '.':>8}")
            lines.append(f"{r:>3} " + "".join(cells))
        return "\n".join(lines)


def _schreyer_levels(M: PresentedModule, cap: int):
    """Extend the cached Schreyer data of M to `cap` levels (or exhaustion).
    Level l holds the GB of the l-th syzygy module as vectors over level
    l-1's basis."""
    rc = M.ring
    if M._res_state is None:
        base = PotOrder(rc.order)
        cols = [c for c in M.presentation.columns if c]
        if not cols:
            M._res_state = {"levels": [], "orders": [base], "done": True}
        else:
            gb, _ = module_gb(cols, base, rc)
            M._res_state = {"levels": [gb], "orders": [base], "done": not gb}
    st = M._res_state
    # orders[l] is the order on the ambient free module of levels[l]
    while not st["done"] and len(st["levels"]) < cap:
        prev = st["levels"][-1]
        order_prev = st["orders"][len(st["levels"]) - 1]
        log.debug("resolution level %d: %d basis vectors",
                  len(st["levels"]), len(prev))
        taus, next_order = schreyer_step(prev, order_prev, rc)
        if not taus:
            st["done"] = True
            break
        st["levels"].append(taus)
        st["orders"].append(next_order)
    return st


def _levels_to_maps(M: PresentedModule, st) -> list:
    """Raw (non-minimal) resolution maps from Schreyer levels."""
    rc = M.ring
    maps = []
    F_prev = M.generators
    for level in st["levels"]:
        twists = [_vec_degree(v, F_prev.twists) for v, _ in level]
        F = free_module(rc, twists)
        maps.append(GradedMap(F, F_prev, [v for v, _ in level]))
        F_prev = F
    return maps


def free_resolution(M: PresentedModule, cap: Optional[int] = None,
                    minimal: bool = True) -> FreeResolution:
    """Free resolution of M via Schreyer frames, cut off at `cap` steps.

    With minimal=True (the default) constant entries are cancelled so the
    Betti numbers can be read off.  minimal=False returns the raw Schreyer
    resolution: still exact, so rank-based homology (graded Ext) is computed
    correctly on it, at a fraction of the cost.  The default cap is the
    variable count (Hilbert bound); hitting the cap before exactness is
    flagged, not an error."""
    rc = M.ring
    hard = rc.nvars + 3  # Schreyer frames can run past the Hilbert bound
    if cap is None:
        cap = rc.nvars
    if not minimal:
        st = _schreyer_levels(M, min(cap, hard))
        maps = _levels_to_maps(M, st)[:cap]
        f0 = maps[0].target if maps else M.generators
        capped = (not st["done"]) and len(maps) >= cap
        return FreeResolution(maps=maps, f0=f0, capped=capped)
    want = min(cap + 1, hard)  # one extra level so step `cap` minimizes right
    st = _schreyer_levels(M, want)
    have = len(st["levels"])
    if M._min_complex is None or M._min_complex[0] < min(have, want):
        raw = _levels_to_maps(M, st)
        minimized = minimize_complex(raw)
        M._min_complex = (min(have, want), minimized)
    minimized = M._min_complex[1]
    maps = minimized[:cap]
    f0 = maps[0].target if maps else M.generators
    # trailing zero-rank modules can appear after truncation
    while maps and maps[-1].source.rank == 0:
        maps.pop()
    capped = (not st["done"]) and len(st["levels"]) >= want and len(maps) >= cap
    return FreeResolution(maps=list(maps), f0=f0, capped=capped)


# ---------------------------------------------------------------------------
# complex minimization (stripping constant entries)
# ---------------------------------------------------------------------------


class _MutMap:
    """Mutable entry-indexed view of a graded map used during minimization."""

    def __init__(self, gm: GradedMap):
        self.src_tw = list(gm.source.twists)
        self.tgt_tw = list(gm.target.twists)
        self.entries = {}  # (i, j) -> poly dict
        self.rows = {}
        self.cols = {}
        for j, col in enumerate(gm.columns):
            for (i, m), c in col.items():
                self.entries.setdefault((i, j), {})[m] = c
        for (i, j) in self.entries:
            self.rows.setdefault(i, set()).add(j)
            self.cols.setdefault(j, set()).add(i)
        self.live_rows = set(range(len(self.tgt_tw)))
        self.live_cols = set(range(len(self.src_tw)))

    def set_entry(self, i, j, poly: dict):
        if poly:
            self.entries[(i, j)] = poly
            self.rows.setdefault(i, set()).add(j)
            self.cols.setdefault(j, set()).add(i)
        else:
            if (i, j) in self.entries:
                del self.entries[(i, j)]
                self.rows[i].discard(j)
                self.cols[j].discard(i)

    def drop_row(self, i):
        for j in list(self.rows.get(i, ())):
            self.set_entry(i, j, {})
        self.live_rows.discard(i)

    def drop_col(self, j):
        for i in list(self.cols.get(j, ())):
            self.set_entry(i, j, {})
        self.live_cols.discard(j)

    def find_unit(self, zero_mono):
        for (i, j), poly in self.entries.items():
            if zero_mono in poly:
                return i, j, poly[zero_mono]
        return None

    def to_graded_map(self, ring) -> GradedMap:
        rmap = {i: k for k, i in enumerate(sorted(self.live_rows))}
        cmap = {j: k for k, j in enumerate(sorted(self.live_cols))}
        tgt = free_module(ring, [self.tgt_tw[i] for i in sorted(self.live_rows)])
        src = free_module(ring, [self.src_tw[j] for j in sorted(self.live_cols)])
        cols = [dict() for _ in range(src.rank)]
        for (i, j), poly in self.entries.items():
            for m, c in poly.items():
                cols[cmap[j]][(rmap[i], m)] = c
        return GradedMap(src, tgt, cols)


def _poly_mul_dict(a: dict, b: dict, p: int) -> dict:
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            c = (out.get(m, 0) + c1 * c2) % p
            if c:
                out[m] = c
            elif m in out:
                del out[m]
    return out


def minimize_complex(maps: Sequence[GradedMap]) -> list:
    """Strip all constant entries from a chain of maps, preserving homology.

    With a unit at (i, j) of d_l, generator j of F_l and generator i of
    F_{l-1} split off; the Schur complement updates d_l, while in d_{l+1}
    row j and in d_{l-1} column i vanish automatically and are deleted."""
    if not maps:
        return []
    ring = maps[0].ring
    p = ring.field.modulus
    zero = ring.zero_mono()
    muts = [_MutMap(gm) for gm in maps]
    # worklist of candidate unit positions per map; stale candidates are
    # re-validated on pop, and Schur updates push freshly created ones
    queues = [deque(pos for pos, poly in mm.entries.items() if zero in poly)
              for mm in muts]

    def next_unit(mm, q):
        while q:
            i, j = q.popleft()
            poly = mm.entries.get((i, j))
            if poly and zero in poly:
                return i, j, poly[zero]
        return None

    changed = True
    while changed:
        changed = False
        for l, mm in enumerate(muts):
            q = queues[l]
            done = 0
            while True:
                unit = next_unit(mm, q)
                if unit is None:
                    break
                changed = True
                done += 1
                if done % 500 == 0:
                    log.debug("minimize: level %d, %d units cancelled", l, done)
                i, j, c = unit
                cinv = pow(c, p - 2, p)
                row_entries = [(k, dict(mm.entries[(i, k)]))
                               for k in list(mm.rows.get(i, ())) if k != j]
                col_entries = [(m_, dict(mm.entries[(m_, j)]))
                               for m_ in list(mm.cols.get(j, ())) if m_ != i]
                # Schur complement on d_l
                for m_, colp in col_entries:
                    beta = {mo: cv * cinv % p for mo, cv in colp.items()}
                    for k, rowp in row_entries:
                        delta = _poly_mul_dict(beta, rowp, p)
                        cur = dict(mm.entries.get((m_, k), {}))
                        for mo, cv in delta.items():
                            c2 = (cur.get(mo, 0) - cv) % p
                            if c2:
                                cur[mo] = c2
                            elif mo in cur:
                                del cur[mo]
                        mm.set_entry(m_, k, cur)
                        if zero in cur:
                            q.append((m_, k))
                mm.drop_row(i)
                mm.drop_col(j)
                if l + 1 < len(muts):
                    # row j of d_{l+1} is now zero in the new basis
                    muts[l + 1].drop_row(j)
                if l > 0:
                    muts[l - 1].drop_col(i)
    out = []
    for mm in muts:
        out.append(mm.to_graded_map(ring))
    # re-wire shared modules so sources and targets agree after deletions
    for l in range(len(out) - 1):
        out[l + 1] = GradedMap(out[l + 1].source, out[l].source, out[l + 1].columns)
    return out


def minimized_boundary(M: PresentedModule, l: int) -> GradedMap:
    """The l-th differential of the minimal free resolution of M, up to zero
    rows and columns (which never affect graded ranks).

    Minimizing a complex only ever applies Schur updates *within* one map;
    cancellations in neighbouring maps just delete rows/columns that have
    already become zero.  So each differential can be minimized on its own,
    lazily, and the expensive levels that a computation never touches are
    skipped entirely.  Requires the Schreyer levels up to l to exist
    (arrange by calling free_resolution(..., minimal=False) first)."""
    cached = M._level_min.get(l)
    if cached is not None:
        return cached
    st = M._res_state
    if st is None or l < 1 or l > len(st["levels"]):
        raise UsageError(f"Schreyer level {l} has not been computed")
    raw = _levels_to_maps(M, st)[l - 1]
    gm = minimize_complex([raw])[0]
    M._level_min[l] = gm
    return gm


def prune_presentation(M: PresentedModule) -> PresentedModule:
    """Minimal presentation: strip constant entries (so the generators form a
    minimal generating set) and drop zero relation columns.  No Groebner pass
    happens here; resolutions recompute their own bases."""
    phi = minimize_complex([M.presentation])[0]
    rc = phi.ring
    vecs = [c for c in phi.columns if c]
    src = free_module(rc, [_vec_degree(v, phi.target.twists) for v in vecs])
    out = PresentedModule(GradedMap(src, phi.target, vecs), base_ideal=M.base_ideal)
    return out


# ---------------------------------------------------------------------------
# exterior powers
# ---------------------------------------------------------------------------


def exterior_power(M: PresentedModule, p: int) -> PresentedModule:
    """p-th exterior power of a cokernel M = coker(phi: F -> G).

    Presented as coker(F (x) wedge^{p-1} G -> wedge^p G), the map sending
    f (x) (g_{i_1} ^ ... ^ g_{i_{p-1}}) to phi(f) ^ g_{i_1} ^ ... with the
    usual sign expansion, then pruned to a minimal presentation.

    For p = 0 the result is the base ring -- or the coordinate ring S/I when
    the module records a base ideal I."""
    if p < 0:
        raise UsageError("exterior power index must be non-negative")
    rc = M.ring
    if p == 0:
        if M.base_ideal is not None:
            return presented_from_ideal(M.base_ideal)
        return free_presented(rc, [0])
    phi = M.presentation
    G = phi.target
    g = G.rank
    if p > g:
        return free_presented(rc, [])
    subsets = list(combinations(range(g), p))
    index = {s: k for k, s in enumerate(subsets)}
    tgt = free_module(rc, [sum(G.twists[i] for i in s) for s in subsets])
    subs_small = list(combinations(range(g), p - 1))
    pmod = rc.field.modulus
    cols = []
    col_twists = []
    for j, col in enumerate(phi.columns):
        for s in subs_small:
            out = {}
            for (i, m), c in col.items():
                if i in s:
                    continue
                merged = tuple(sorted(s + (i,)))
                sign = (-1) ** merged.index(i)
                key = (index[merged], m)
                val = (out.get(key, 0) + sign * c) % pmod
                if val:
                    out[key] = val
                elif key in out:
                    del out[key]
            if out:
                cols.append(out)
                col_twists.append(phi.source.twists[j]
                                  + sum(G.twists[i] for i in s))
    src = free_module(rc, col_twists)
    raw = PresentedModule(GradedMap(src, tgt, cols))
    return prune_presentation(raw)
