"""Numerical invariants of homogeneous ideals.

Hilbert series via the pivot recursion on the lead-term monomial ideal, from
which projective dimension and degree are read off; Jacobian-minor test for
the singular locus."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .gb import IdealHandle, buchberger, ideal, normal_form
from .poly import Monomial, Polynomial, UsageError, mono_divides


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals
# ---------------------------------------------------------------------------


def _minimalize(mons: Sequence[Monomial]) -> tuple:
    mons = sorted(set(mons), key=lambda m: (sum(m), m))
    out = []
    for m in mons:
        if not any(mono_divides(q, m) for q in out):
            out.append(m)
    return tuple(out)


def _poly_mul_1d(a: dict, b: dict) -> dict:
    out = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            c = out.get(d, 0) + ca * cb
            if c:
                out[d] = c
            elif d in out:
                del out[d]
    return out


def _poly_add_1d(a: dict, b: dict, shift: int = 0) -> dict:
    out = dict(a)
    for d, c in b.items():
        d += shift
        c2 = out.get(d, 0) + c
        if c2:
            out[d] = c2
        elif d in out:
            del out[d]
    return out


def _hilbert_numerator(mons: tuple, cache: dict) -> dict:
    """Numerator of the Hilbert series of S/(mons) over (1-T)^v, as an
    integer polynomial {degree: coeff}."""
    mons = _minimalize(mons)
    if mons in cache:
        return cache[mons]
    if not mons:
        result = {0: 1}
    elif any(sum(m) == 0 for m in mons):
        result = {}
    else:
        nv = len(mons[0])
        mixed = [m for m in mons if sum(1 for e in m if e) > 1]
        # pure-power base case: numerator is a product of (1 - T^a)
        if not mixed:
            result = {0: 1}
            for m in mons:
                result = _poly_mul_1d(result, {0: 1, sum(m): -1})
        else:
            # pivot on the variable busiest among the mixed generators
            support = [sum(1 for m in mixed if m[i]) for i in range(nv)]
            piv = max(range(nv), key=lambda i: (support[i],))
            pivot = tuple(1 if i == piv else 0 for i in range(nv))
            plus = _hilbert_numerator(mons + (pivot,), cache)
            colon = _hilbert_numerator(
                tuple(m[:piv] + (max(m[piv] - 1, 0),) + m[piv + 1:] for m in mons),
                cache,
            )
            result = _poly_add_1d(plus, colon, shift=1)
    cache[mons] = result
    return result


@dataclass(frozen=True)
class HilbertSeries:
    """Series of S/I as numerator / (1-T)^nvars."""

    numerator: tuple  # ((degree, coeff), ...) sorted by degree
    nvars: int

    def numerator_dict(self) -> dict:
        return dict(self.numerator)

    def reduced(self):
        """Cancel all (1-T) factors: returns (reduced numerator dict, pole
        order of the series at T=1)."""
        num = self.numerator_dict()
        cancelled = 0
        while num and sum(num.values()) == 0:
            # divide by (1 - T): synthetic division
            maxd = max(num)
            out = {}
            acc = 0
            for d in range(0, maxd):
                acc += num.get(d, 0)
                if acc:
                    out[d] = acc
            num = out
            cancelled += 1
        return num, self.nvars - cancelled

    def krull_dimension(self) -> int:
        """Krull dimension of S/I (0 for the zero ring)."""
        if not self.numerator:
            return 0
        _, pole = self.reduced()
        return pole

    def degree(self) -> Optional[int]:
        num, _ = self.reduced()
        if not num:
            return None
        return sum(num.values())

    def hilbert_function(self, d: int) -> int:
        """dim_k (S/I)_d by expanding numerator / (1-T)^v."""
        if d < 0:
            return 0
        from math import comb

        v = self.nvars
        return sum(
            c * comb(d - j + v - 1, v - 1) for j, c in self.numerator if j <= d
        )

    def hilbert_polynomial_at(self, d: int) -> int:
        """Value of the Hilbert polynomial of S/I at d (exact)."""
        num, dim = self.reduced()
        if dim <= 0:
            return 0
        val = Fraction(0)
        for j, c in num.items():
            prod = Fraction(1)
            for i in range(1, dim):
                prod *= Fraction(d - j + i, i)
            val += c * prod
        assert val.denominator == 1
        return int(val)


def hilbert_series(I: IdealHandle) -> HilbertSeries:
    if not I.is_homogeneous():
        raise UsageError("Hilbert series requires a homogeneous ideal")
    leads = tuple(g.lm() for g in I.groebner_basis())
    num = _hilbert_numerator(leads, {})
    return HilbertSeries(tuple(sorted(num.items())), I.ring.nvars)


def numerical_invariants(I: IdealHandle):
    """(projective dimension, degree) of Proj(S/I); empty Proj gives
    (-1, None)."""
    hs = hilbert_series(I)
    dim = hs.krull_dimension()
    if dim <= 0:
        return -1, None
    return dim - 1, hs.degree()


def euler_char_structure_sheaf(I: IdealHandle) -> int:
    """chi(O_X) = Hilbert polynomial of S/I evaluated at 0."""
    return hilbert_series(I).hilbert_polynomial_at(0)


# ---------------------------------------------------------------------------
# singular locus
# ---------------------------------------------------------------------------


def _det(rows, cols, mat, ring):
    """Determinant of the (rows x cols) submatrix by expansion along the
    first listed row; rows/cols are index tuples."""
    if len(rows) == 1:
        return mat[rows[0]][cols[0]]
    r0 = rows[0]
    rest = rows[1:]
    total = ring.zero()
    sign = 1
    for k, c in enumerate(cols):
        entry = mat[r0][c]
        if entry:
            sub = _det(rest, cols[:k] + cols[k + 1:], mat, ring)
            if sub:
                term = entry * sub
                total = total + term if sign > 0 else total - term
        sign = -sign
    return total


def _krull_dim_of_gb(gb, ring) -> int:
    I = ideal(ring, gb)
    I._gb[ring.order.name] = gb
    return hilbert_series(I).krull_dimension()


def singular_locus_codim(I: IdealHandle, batch: int = 24) -> int:
    """Codimension in the ambient ring of the Jacobian singular locus of the
    scheme cut out by I's reduced Groebner generators.

    Minors are adjoined in a deterministic order and the dimension is
    re-checked batchwise so that an empty singular locus is detected without
    enumerating every minor.  When the minors ideal is irrelevant or unit the
    answer is the variable count v."""
    if not I.is_homogeneous():
        raise UsageError("singular locus requires a homogeneous ideal")
    rc = I.ring
    v = rc.nvars
    pd, _ = numerical_invariants(I)
    if pd < 0:
        return v
    c = v - 1 - pd
    gb = I.groebner_basis()
    jac = [[g.derivative(j) for j in range(v)] for g in gb]
    if c == 0:
        # the empty 0x0 minor is the unit: nothing is singular
        return v
    if c > len(gb):
        # fewer equations than the codimension: everything is singular
        return v - hilbert_series(I).krull_dimension()

    cur_gb = list(gb)
    best = hilbert_series(I).krull_dimension()
    pending = []

    def flush():
        nonlocal cur_gb, pending, best
        fresh = []
        for m in pending:
            r = normal_form(m, cur_gb, rc.order)
            if r:
                fresh.append(r.monic())
        pending = []
        if fresh:
            cur_gb = buchberger(cur_gb + fresh, rc.order, ring=rc)
            best = _krull_dim_of_gb(cur_gb, rc)

    for rows in combinations(range(len(gb)), c):
        for cols in combinations(range(v), c):
            m = _det(rows, cols, jac, rc)
            if m:
                pending.append(m)
            if len(pending) >= batch:
                flush()
                if best == 0:
                    return v
    flush()
    return v - best


@dataclass
class InvariantReport:
    proj_dim: int
    degree: Optional[int]
    sing_codim: int
    smooth: bool
    ambient_dim: int

    def to_json(self) -> dict:
        return {
            "proj_dim": self.proj_dim,
            "degree": self.degree,
            "sing_codim": self.sing_codim,
            "smooth": self.smooth,
            "ambient_dim": self.ambient_dim,
        }

    def to_text(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def invariant_report(I: IdealHandle) -> InvariantReport:
    pd, deg = numerical_invariants(I)
    sc = singular_locus_codim(I)
    v = I.ring.nvars
    return InvariantReport(
        proj_dim=pd,
        degree=deg,
        sing_codim=sc,
        smooth=sc > v - 1,
        ambient_dim=v - 1,
    )
