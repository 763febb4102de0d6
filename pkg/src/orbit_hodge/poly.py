"""Prime-field arithmetic, term orders and sparse multivariate polynomials.

Everything downstream (Groebner bases, resolutions, cohomology) is built on
the immutable values defined here.  Monomials are plain exponent tuples; a
polynomial is a dict from exponent tuple to a nonzero residue.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from operator import add as _add
from typing import Iterable, Mapping

MAX_DEGREE = 1 << 15  # exponent overflow guard; degrees here are tiny


class AlgebraError(Exception):
    pass


class UsageError(AlgebraError):
    """Caller violated a precondition (mismatched rings, bad input)."""


class DomainError(AlgebraError):
    """Mathematically undefined request (inverting zero, composite modulus)."""


class ComputationError(AlgebraError):
    """A computation could not be completed (caps exceeded, inconsistency)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for word-sized n
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field Z/p.  Characteristic 2 is rejected: the Jacobian smoothness
    criterion degenerates there."""

    modulus: int = 32749

    def __post_init__(self):
        if not _is_prime(self.modulus):
            raise DomainError(f"modulus {self.modulus} is not prime")
        if self.modulus < 3:
            raise DomainError("characteristic 2 is not supported")

    def of(self, a: int) -> int:
        return a % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def neg(self, a: int) -> int:
        return -a % self.modulus

    def inv(self, a: int) -> int:
        a %= self.modulus
        if a == 0:
            raise DomainError("inversion of zero")
        return pow(a, self.modulus - 2, self.modulus)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.modulus


def field_arith(field: PrimeField, a: int, b: int | None, op: str) -> int:
    """Dispatch wrapper over PrimeField; op in {add, sub, mul, inv, neg}."""
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "neg":
        return field.neg(a)
    if op == "inv":
        return field.inv(a)
    raise UsageError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# monomials: plain exponent tuples
# ---------------------------------------------------------------------------

Monomial = tuple  # exponent tuple, one entry per ring variable


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    out = tuple(map(_add, m1, m2))
    if sum(out) >= MAX_DEGREE:
        raise ComputationError("monomial degree overflow")
    return out


def mono_divides(m1: Monomial, m2: Monomial) -> bool:
    """True when m1 | m2."""
    return all(a <= b for a, b in zip(m1, m2))


def mono_div(m1: Monomial, m2: Monomial) -> Monomial:
    """m1 / m2; caller guarantees divisibility."""
    return tuple(a - b for a, b in zip(m1, m2))


def mono_lcm(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(m1, m2))


# ---------------------------------------------------------------------------
# term orders
# ---------------------------------------------------------------------------


class TermOrder:
    """Total, multiplicative well-order on monomials.  Bigger key = bigger
    monomial; keys are plain tuples so Python comparison does the work."""

    name: str

    def key(self, m: Monomial):
        raise NotImplementedError

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        if len(m1) != len(m2):
            raise UsageError("monomials from different rings")
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def __eq__(self, other):
        return isinstance(other, TermOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class GrevLex(TermOrder):
    name = "grevlex"

    def key(self, m: Monomial):
        return (sum(m), tuple(-e for e in reversed(m)))


class Lex(TermOrder):
    name = "lex"

    def key(self, m: Monomial):
        return tuple(m)


class BlockElimination(TermOrder):
    """Eliminates the first k variables: grevlex on the block, then grevlex
    on the rest."""

    def __init__(self, k: int):
        if k < 0:
            raise UsageError("elimination block size must be >= 0")
        self.k = k
        self.name = f"block({k})"

    def key(self, m: Monomial):
        head, tail = m[: self.k], m[self.k:]
        return (
            sum(head),
            tuple(-e for e in reversed(head)),
            sum(tail),
            tuple(-e for e in reversed(tail)),
        )


GREVLEX = GrevLex()
LEX = Lex()


def order_from_name(name: str) -> TermOrder:
    if name == "grevlex":
        return GREVLEX
    if name == "lex":
        return LEX
    m = re.fullmatch(r"block\((\d+)\)", name)
    if m:
        return BlockElimination(int(m.group(1)))
    raise UsageError(f"unknown term order {name!r}")


def monomial_compare(m1: Monomial, m2: Monomial, order: TermOrder) -> int:
    """-1, 0 or 1 as m1 <, =, > m2 in the given order."""
    return order.compare(m1, m2)


# ---------------------------------------------------------------------------
# ring context and polynomials
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


@dataclass(frozen=True)
class RingContext:
    names: tuple
    field: PrimeField
    order: TermOrder

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise UsageError("variable names must be unique")
        for n in self.names:
            if not _NAME_RE.fullmatch(n):
                raise UsageError(f"bad variable name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero_mono(self) -> Monomial:
        return (0,) * self.nvars

    def var(self, i: int) -> "Polynomial":
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): 1})

    def var_named(self, name: str) -> "Polynomial":
        return self.var(self.names.index(name))

    def constant(self, c: int) -> "Polynomial":
        c = self.field.of(c)
        return Polynomial(self, {} if c == 0 else {self.zero_mono(): c})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def monomials_of_degree(self, d: int):
        """All monomials of total degree d, descending in the ring order."""
        if d < 0:
            return []
        out = []

        def rec(prefix, remaining, pos):
            if pos == self.nvars - 1:
                out.append(tuple(prefix + [remaining]))
                return
            for e in range(remaining, -1, -1):
                rec(prefix + [e], remaining - e, pos + 1)

        if self.nvars == 0:
            return [()] if d == 0 else []
        rec([], d, 0)
        out.sort(key=self.order.key, reverse=True)
        return out


def ring(names: Iterable[str], modulus: int = 32749,
         order: TermOrder = GREVLEX) -> RingContext:
    return RingContext(tuple(names), PrimeField(modulus), order)


class Polynomial:
    """Immutable sparse polynomial: dict {exponent tuple: nonzero residue}."""

    __slots__ = ("ring", "terms", "_lt")

    def __init__(self, ring: RingContext, terms: Mapping):
        self.ring = ring
        self.terms = dict(terms)
        self._lt = None

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lt(self):
        """Leading (monomial, coefficient) pair in the ring order."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        if self._lt is None:
            m = max(self.terms, key=self.ring.order.key)
            self._lt = (m, self.terms[m])
        return self._lt

    def lm(self) -> Monomial:
        return self.lt()[0]

    def lc(self) -> int:
        return self.lt()[1]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        c = self.lc()
        if c == 1:
            return self
        inv = self.ring.field.inv(c)
        p = self.ring.field.modulus
        return Polynomial(self.ring, {m: c2 * inv % p for m, c2 in self.terms.items()})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise UsageError("polynomials from different rings")

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check(other)
        p = self.ring.field.modulus
        out = dict(self.terms)
        for m, c in other.terms.items():
            c2 = (out.get(m, 0) + c) % p
            if c2:
                out[m] = c2
            elif m in out:
                del out[m]
        return Polynomial(self.ring, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        p = self.ring.field.modulus
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            c = self.ring.field.of(other)
            if c == 0:
                return self.ring.zero()
            p = self.ring.field.modulus
            return Polynomial(self.ring, {m: c0 * c % p for m, c0 in self.terms.items()})
        self._check(other)
        p = self.ring.field.modulus
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = (out.get(m, 0) + c1 * c2) % p
                if c:
                    out[m] = c
                elif m in out:
                    del out[m]
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise UsageError("negative polynomial power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def mul_term(self, m: Monomial, c: int) -> "Polynomial":
        p = self.ring.field.modulus
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring, {mono_mul(m0, m): c0 * c % p for m0, c0 in self.terms.items()}
        )

    # -- calculus and substitution ------------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        p = self.ring.field.modulus
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            c2 = c * e % p
            if not c2:
                continue
            m2 = m[:i] + (e - 1,) + m[i + 1:]
            c3 = (out.get(m2, 0) + c2) % p
            if c3:
                out[m2] = c3
            elif m2 in out:
                del out[m2]
        return Polynomial(self.ring, out)

    def specialize(self, assignments: Mapping) -> "Polynomial":
        """Substitute field values for variables (names or indices)."""
        idx = {}
        for k, v in assignments.items():
            i = self.ring.names.index(k) if isinstance(k, str) else k
            if not 0 <= i < self.ring.nvars:
                raise UsageError(f"no variable {k!r} in ring")
            idx[i] = self.ring.field.of(v)
        if not idx:
            return self
        p = self.ring.field.modulus
        out = {}
        for m, c in self.terms.items():
            for i, val in idx.items():
                c = c * pow(val, m[i], p) % p
                if not c:
                    break
            if not c:
                continue
            m2 = tuple(0 if i in idx else e for i, e in enumerate(m))
            c2 = (out.get(m2, 0) + c) % p
            if c2:
                out[m2] = c2
            elif m2 in out:
                del out[m2]
        return Polynomial(self.ring, out)

    # -- text form ----------------------------------------------------------

    def text(self) -> str:
        """Canonical deterministic text form, terms in descending order."""
        if not self.terms:
            return "0"
        p = self.ring.field.modulus
        pieces = []
        for m, c in self.sorted_terms():
            neg = c > p // 2
            mag = p - c if neg else c
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"<poly {self.text()}>"


_TERM_SPLIT = re.compile(r"(?=[+-])")
_FACTOR_RE = re.compile(r"^(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?)$")


def parse_polynomial(rc: RingContext, text: str) -> Polynomial:
    """Inverse of Polynomial.text (accepts any +/- separated monomial form)."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return rc.zero()
    p = rc.field.modulus
    index = {n: i for i, n in enumerate(rc.names)}
    out = {}
    for chunk in _TERM_SPLIT.split(text):
        if not chunk:
            continue
        sign = 1
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = -1
            chunk = chunk[1:]
        if not chunk:
            raise UsageError(f"cannot parse polynomial {text!r}")
        coeff = sign
        exps = [0] * rc.nvars
        for factor in chunk.split("*"):
            m = _FACTOR_RE.match(factor)
            if not m:
                raise UsageError(f"cannot parse factor {factor!r}")
            if m.group(1) is not None:
                coeff *= int(m.group(1))
            else:
                name = m.group(2)
                if name not in index:
                    raise UsageError(f"unknown variable {name!r}")
                exps[index[name]] += int(m.group(3) or 1)
        mono = tuple(exps)
        c = (out.get(mono, 0) + coeff) % p
        if c:
            out[mono] = c
        elif mono in out:
            del out[mono]
    return Polynomial(rc, out)


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Dispatch wrapper; op in {add, sub, mul}."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise UsageError(f"unknown polynomial operation {op!r}")
