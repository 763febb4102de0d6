"""Groebner bases and ideal calculus.

Buchberger with the normal selection strategy and the product/chain
criteria; on top of it: normal forms, elimination, intersection, quotient
saturation via the extra-variable trick, and homogenization.
"""
from __future__ import annotations

import hashlib
import heapq
import json
from typing import Iterable, Optional, Sequence

from .poly import (
    GREVLEX,
    BlockElimination,
    Monomial,
    Polynomial,
    RingContext,
    TermOrder,
    UsageError,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    order_from_name,
    parse_polynomial,
    ring as make_ring,
)

# Optional persistent cache, installed by the CLI layer.  The library treats
# it as a pure memo keyed by (generators, order, modulus).
_GB_CACHE = None


def set_cache(cache) -> None:
    global _GB_CACHE
    _GB_CACHE = cache


def get_cache():
    return _GB_CACHE


# ---------------------------------------------------------------------------
# division / normal form
# ---------------------------------------------------------------------------


def _reduce(f: Polynomial, basis: Sequence[Polynomial], order: TermOrder,
            with_quotients: bool = False):
    """Full multivariate division of f by basis.  Returns the remainder, and
    optionally the quotient list q with f = sum(q_i b_i) + r."""
    rc = f.ring
    p = rc.field.modulus
    key = order.key
    binfo = [(g.lm(), g.lc(), g) for g in basis if g]
    quotients = [dict() for _ in binfo] if with_quotients else None
    work = dict(f.terms)
    remainder = {}
    # every monomial introduced by a reduction step is strictly smaller than
    # the one reduced, so scanning for the current max terminates
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        reduced = False
        for bi, (lm, lc, g) in enumerate(binfo):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                factor = c * pow(lc, p - 2, p) % p
                if with_quotients:
                    quotients[bi][q] = (quotients[bi].get(q, 0) + factor) % p
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    m2 = mono_mul(gm, q)
                    c2 = (work.get(m2, 0) - factor * gc) % p
                    if c2:
                        work[m2] = c2
                    elif m2 in work:
                        del work[m2]
                reduced = True
                break
        if not reduced:
            remainder[m] = c
    r = Polynomial(rc, remainder)
    if with_quotients:
        qs = [Polynomial(rc, {m: c for m, c in qd.items() if c}) for qd in quotients]
        return r, qs
    return r


def normal_form(f: Polynomial, basis: Iterable[Polynomial],
                order: Optional[TermOrder] = None) -> Polynomial:
    """Remainder of f on full division by basis; no monomial of the result is
    divisible by a basis leading monomial."""
    basis = [g for g in basis if g]
    if order is None:
        order = f.ring.order
    if not basis or f.is_zero():
        return f
    return _reduce(f, basis, order)


def normal_form_with_quotients(f: Polynomial, basis: Sequence[Polynomial],
                               order: Optional[TermOrder] = None):
    if order is None:
        order = f.ring.order
    basis = list(basis)
    return _reduce(f, basis, order, with_quotients=True)


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------


def _spair(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    lmf, lcf = f.lt()
    lmg, lcg = g.lt()
    lcm = mono_lcm(lmf, lmg)
    p = f.ring.field.modulus
    a = f.mul_term(mono_div(lcm, lmf), pow(lcf, p - 2, p))
    b = g.mul_term(mono_div(lcm, lmg), pow(lcg, p - 2, p))
    return a - b


def buchberger(gens: Iterable[Polynomial], order: Optional[TermOrder] = None,
               ring: Optional[RingContext] = None) -> list:
    """Unique reduced Groebner basis, sorted ascending by leading monomial.
    The unit ideal returns [1]."""
    gens = [g for g in gens if g]
    if not gens and ring is None:
        raise UsageError("no generators and no ring given")
    rc = ring if ring is not None else gens[0].ring
    if order is None:
        order = rc.order
    for g in gens:
        if g.ring != rc:
            raise UsageError("generators from different rings")
    if not gens:
        return []

    basis: list = []
    for g in sorted(gens, key=lambda h: order.key(h.lm())):
        r = normal_form(g, basis, order)
        if r:
            basis.append(r.monic())

    pairs = []  # heap of (lcm degree, lcm key, i, j)
    def push_pairs(j):
        lmj = basis[j].lm()
        for i in range(j):
            lcm = mono_lcm(basis[i].lm(), lmj)
            heapq.heappush(pairs, (sum(lcm), order.key(lcm), i, j))

    for j in range(len(basis)):
        push_pairs(j)

    while pairs:
        _, lcmkey, i, j = heapq.heappop(pairs)
        fi, fj = basis[i], basis[j]
        lmi, lmj = fi.lm(), fj.lm()
        lcm = mono_lcm(lmi, lmj)
        if order.key(lcm) != lcmkey:
            continue
        # product criterion
        if mono_mul(lmi, lmj) == lcm:
            continue
        # chain criterion: some other basis element divides the lcm strictly
        skip = False
        for k, fk in enumerate(basis):
            if k in (i, j):
                continue
            lmk = fk.lm()
            if mono_divides(lmk, lcm):
                l1 = mono_lcm(lmi, lmk)
                l2 = mono_lcm(lmk, lmj)
                if l1 != lcm and l2 != lcm:
                    skip = True
                    break
        if skip:
            continue
        r = normal_form(_spair(fi, fj, order), basis, order)
        if r:
            basis.append(r.monic())
            push_pairs(len(basis) - 1)

    return _interreduce(basis, order)


def _interreduce(basis: Sequence[Polynomial], order: TermOrder) -> list:
    """Turn a Groebner basis into the reduced one."""
    basis = [g.monic() for g in basis if g]
    # drop elements whose lead is divisible by another lead
    keep = []
    for i, g in enumerate(basis):
        lm = g.lm()
        redundant = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            lmh = h.lm()
            if mono_divides(lmh, lm) and (lmh != lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = normal_form(g, others, order)
        if r:
            out.append(r.monic())
    out.sort(key=lambda g: order.key(g.lm()))
    return out


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


class IdealHandle:
    """Generator list plus lazily cached reduced Groebner bases per order."""

    def __init__(self, ring: RingContext, generators: Iterable[Polynomial]):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise UsageError("generator from a different ring")
            if g:
                gens.append(g)
        self.generators = tuple(gens)
        self._gb = {}

    def __repr__(self):
        return f"<ideal ({', '.join(g.text() for g in self.generators)})>"

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return self.ring == other.ring and self.groebner_basis() == other.groebner_basis()

    def groebner_basis(self, order: Optional[TermOrder] = None) -> list:
        if order is None:
            order = self.ring.order
        if order.name not in self._gb:
            gb = None
            if _GB_CACHE is not None:
                gb = _GB_CACHE.get(self, order)
            if gb is None:
                gb = buchberger(self.generators, order, ring=self.ring)
                if _GB_CACHE is not None:
                    _GB_CACHE.put(self, order, gb)
            self._gb[order.name] = gb
        return self._gb[order.name]

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].degree() == 0

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self.groebner_basis(), self.ring.order).is_zero()

    def plus(self, other: "IdealHandle") -> "IdealHandle":
        return IdealHandle(self.ring, self.generators + other.generators)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ring": {
                "vars": list(self.ring.names),
                "modulus": self.ring.field.modulus,
                "order": self.ring.order.name,
            },
            "generators": [g.text() for g in self.generators],
        }

    @staticmethod
    def from_json(doc: dict) -> "IdealHandle":
        r = doc["ring"]
        rc = make_ring(r["vars"], r["modulus"], order_from_name(r["order"]))
        return IdealHandle(rc, [parse_polynomial(rc, t) for t in doc["generators"]])


def ideal(ring: RingContext, gens: Iterable[Polynomial]) -> IdealHandle:
    return IdealHandle(ring, gens)


def ideal_membership(f: Polynomial, I: IdealHandle) -> bool:
    if f.ring != I.ring:
        raise UsageError("polynomial from a different ring")
    return I.contains(f)


# ---------------------------------------------------------------------------
# variable transport helpers
# ---------------------------------------------------------------------------


def _map_poly(f: Polynomial, target: RingContext, var_map: Sequence[int]) -> Polynomial:
    """Transport f into target where var_map[i] is the target index of source
    variable i."""
    out = {}
    for m, c in f.terms.items():
        m2 = [0] * target.nvars
        for i, e in enumerate(m):
            if e:
                m2[var_map[i]] = e
        out[tuple(m2)] = c
    return Polynomial(target, out)


def eliminate(I: IdealHandle, vars: Iterable) -> IdealHandle:
    """I intersected with the subring omitting `vars`, presented by the
    Groebner elements free of those variables (in the original ring)."""
    rc = I.ring
    idxs = sorted(rc.names.index(v) if isinstance(v, str) else v for v in set(vars))
    if not idxs:
        return I
    k = len(idxs)
    rest = [i for i in range(rc.nvars) if i not in idxs]
    perm_names = [rc.names[i] for i in idxs] + [rc.names[i] for i in rest]
    erc = make_ring(perm_names, rc.field.modulus, BlockElimination(k))
    fwd = [0] * rc.nvars  # source index -> permuted index
    for newpos, old in enumerate(idxs + rest):
        fwd[old] = newpos
    back = [0] * rc.nvars
    for newpos, old in enumerate(idxs + rest):
        back[newpos] = old
    gens = [_map_poly(g, erc, fwd) for g in I.generators]
    gb = buchberger(gens, erc.order, ring=erc)
    kept = [g for g in gb if all(all(m[i] == 0 for i in range(k)) for m in g.terms)]
    return IdealHandle(rc, [_map_poly(g, rc, back) for g in kept])


def _with_extra_var(rc: RingContext, name: str = "w_sat"):
    """Ring with a fresh variable prepended, plus the transport map."""
    fresh = name
    while fresh in rc.names:
        fresh += "_"
    erc = make_ring((fresh,) + rc.names, rc.field.modulus, BlockElimination(1))
    fwd = list(range(1, rc.nvars + 1))
    return erc, fwd


def _drop_extra_var(erc: RingContext, rc: RingContext, polys):
    out = []
    for g in polys:
        if any(m[0] for m in g.terms):
            continue
        out.append(Polynomial(rc, {m[1:]: c for m, c in g.terms.items()}))
    return out


def saturate_single(I: IdealHandle, g: Polynomial) -> IdealHandle:
    """I : g^infinity via the extra-variable trick: eliminate w from
    I + (w*g - 1)."""
    if not g:
        raise UsageError("cannot saturate by zero")
    rc = I.ring
    erc, fwd = _with_extra_var(rc)
    gens = [_map_poly(f, erc, fwd) for f in I.generators]
    w = erc.var(0)
    gens.append(w * _map_poly(g, erc, fwd) - erc.one())
    gb = buchberger(gens, erc.order, ring=erc)
    return IdealHandle(rc, _drop_extra_var(erc, rc, gb))


def intersect(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I n J via eliminating w from w*I + (1-w)*J."""
    rc = I.ring
    if J.ring != rc:
        raise UsageError("ideals from different rings")
    erc, fwd = _with_extra_var(rc, "w_int")
    w = erc.var(0)
    one_minus_w = erc.one() - w
    gens = [w * _map_poly(f, erc, fwd) for f in I.generators]
    gens += [one_minus_w * _map_poly(f, erc, fwd) for f in J.generators]
    gb = buchberger(gens, erc.order, ring=erc)
    return IdealHandle(rc, _drop_extra_var(erc, rc, gb))


def saturate(I: IdealHandle, J: Optional[IdealHandle] = None) -> IdealHandle:
    """I : J^infinity.  The default J is the irrelevant maximal ideal (all
    ring variables)."""
    rc = I.ring
    if J is None:
        J = IdealHandle(rc, [rc.var(i) for i in range(rc.nvars)])
    if J.ring != rc:
        raise UsageError("ideals from different rings")
    if J.is_zero():
        raise UsageError("cannot saturate by the zero ideal")
    if I.is_zero():
        return I
    result = None
    base_gb = I.groebner_basis()
    for g in J.generators:
        sat = saturate_single(I, g)
        if sat.groebner_basis() == base_gb:
            sat = I  # already saturated w.r.t. g
        if result is None:
            result = sat
        elif sat.groebner_basis() != result.groebner_basis():
            result = intersect(result, sat)
    return result


def homogenize_poly(f: Polynomial, t_index: int) -> Polynomial:
    d = f.degree()
    out = {}
    for m, c in f.terms.items():
        e = d - sum(m)
        m2 = m[:t_index] + (m[t_index] + e,) + m[t_index + 1:]
        out[m2] = c
    return Polynomial(f.ring, out)


def homogenize_ideal(I: IdealHandle, t) -> IdealHandle:
    """Homogenize each listed generator individually by the variable t.

    Deliberately does NOT replace generators by a Groebner basis first: the
    compactification is defined by the given generators."""
    rc = I.ring
    ti = rc.names.index(t) if isinstance(t, str) else t
    for g in I.generators:
        if any(m[ti] for m in g.terms):
            raise UsageError(f"homogenizing variable {rc.names[ti]} occurs in a generator")
    return IdealHandle(rc, [homogenize_poly(g, ti) for g in I.generators])


def dehomogenize_ideal(I: IdealHandle, t) -> IdealHandle:
    rc = I.ring
    ti = rc.names.index(t) if isinstance(t, str) else t
    return IdealHandle(rc, [g.specialize({ti: 1}) for g in I.generators])


def ideal_cache_key(I: IdealHandle, order: TermOrder) -> str:
    doc = {
        "gens": sorted(g.text() for g in I.generators),
        "order": order.name,
        "ring_order": I.ring.order.name,
        "vars": list(I.ring.names),
        "modulus": I.ring.field.modulus,
    }
    blob = json.dumps(doc, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()
