"""Adjoint-orbit ideals of sl(n+1), potentials, fibres, and critical values.

An orbit is specified by the diagonal H0 of a traceless diagonal matrix; it
is cut out of the generic traceless matrix A by the entries of the minimal
polynomial of H0 evaluated at A.  The potential attached to a regular
diagonal H is trace(H·A); its fibres are cut by potential = lambda.  Both
are compactified by homogenizing with the extra variable t and saturating.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .gb import IdealHandle, homogenize_ideal, ideal, saturate, saturate_single
from .hodge import HodgeDiamond
from .poly import Polynomial, RingContext, UsageError, ring

DEFAULT_PRIME = 32749


@dataclass(frozen=True)
class OrbitSpec:
    """Diagonal entries of H0, the matrix whose adjoint orbit is taken."""

    h0: tuple

    def __post_init__(self):
        if not self.h0:
            raise UsageError("H0 diagonal must be nonempty")
        if sum(self.h0) != 0:
            raise UsageError(f"trace constraint violated: sum{tuple(self.h0)} != 0")

    @property
    def n(self) -> int:
        return len(self.h0) - 1

    @classmethod
    def parse(cls, text: str) -> "OrbitSpec":
        try:
            vals = tuple(int(s) for s in text.split(","))
        except ValueError:
            raise UsageError(f"expected comma-separated integers, got {text!r}")
        return cls(vals)


@dataclass(frozen=True)
class FibreSpec:
    """A potential direction H (regular: distinct diagonal entries) and the
    fibre level lambda, over a given orbit."""

    orbit: OrbitSpec
    h: tuple
    lam: int

    def __post_init__(self):
        if len(self.h) != len(self.orbit.h0):
            raise UsageError("H and H0 must have the same size")
        if sum(self.h) != 0:
            raise UsageError(f"trace constraint violated: sum{tuple(self.h)} != 0")
        if len(set(self.h)) != len(self.h):
            raise UsageError(
                f"regularity constraint violated: H diagonal {tuple(self.h)} "
                "has repeated entries")


@dataclass(frozen=True)
class GenericMatrix:
    """The generic traceless (n+1)x(n+1) matrix over k[x.., y.., z.., t]."""

    ring: RingContext
    n: int
    entries: tuple  # tuple of tuples of Polynomial

    @property
    def size(self) -> int:
        return self.n + 1

    def trace(self) -> Polynomial:
        out = self.ring.zero()
        for i in range(self.size):
            out = out + self.entries[i][i]
        return out


def orbit_ring(n: int, prime: int = DEFAULT_PRIME) -> RingContext:
    m = n * (n + 1) // 2
    names = ([f"x_{i}" for i in range(1, n + 1)]
             + [f"y_{i}" for i in range(1, m + 1)]
             + [f"z_{i}" for i in range(1, m + 1)]
             + ["t"])
    return ring(names, prime)


def generic_traceless_matrix(n: int, prime: int = DEFAULT_PRIME) -> GenericMatrix:
    """x-variables on the diagonal (last entry minus their sum), y-variables
    above the diagonal row-major, z-variables below row-major."""
    if n < 1:
        raise UsageError("matrix size parameter must be at least 1")
    rc = orbit_ring(n, prime)
    size = n + 1
    xs = [rc.var_named(f"x_{i}") for i in range(1, n + 1)]
    last = rc.zero()
    for x in xs:
        last = last - x
    diag = xs + [last]
    rows = [[None] * size for _ in range(size)]
    yi = zi = 0
    for i in range(size):
        for j in range(size):
            if i == j:
                rows[i][j] = diag[i]
            elif i < j:
                yi += 1
                rows[i][j] = rc.var_named(f"y_{yi}")
            else:
                zi += 1
                rows[i][j] = rc.var_named(f"z_{zi}")
    return GenericMatrix(ring=rc, n=n, entries=tuple(tuple(r) for r in rows))


def _mat_mul(A, B, rc):
    size = len(A)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            s = rc.zero()
            for k in range(size):
                s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def minimal_polynomial_ideal(spec: OrbitSpec, prime: int = DEFAULT_PRIME,
                             matrix: GenericMatrix = None) -> IdealHandle:
    """Ideal of the orbit closure: all entries (row-major) of the product of
    (A - lambda_j Id) over the distinct eigenvalues lambda_j of H0, taken in
    first-occurrence order."""
    A = matrix if matrix is not None else generic_traceless_matrix(spec.n, prime)
    rc = A.ring
    size = A.size
    distinct = []
    for v in spec.h0:
        if v not in distinct:
            distinct.append(v)
    prod = [[rc.one() if i == j else rc.zero() for j in range(size)]
            for i in range(size)]
    for lam in distinct:
        factor = [[A.entries[i][j] - (rc.constant(lam) if i == j else rc.zero())
                   for j in range(size)] for i in range(size)]
        prod = _mat_mul(prod, factor, rc)
    gens = [prod[i][j] for i in range(size) for j in range(size)]
    return ideal(rc, [g for g in gens if not g.is_zero()])


def potential_polynomial(h, prime: int = DEFAULT_PRIME,
                         matrix: GenericMatrix = None) -> Polynomial:
    """trace(H.A) = sum h_i A_ii for the diagonal H."""
    h = tuple(h)
    if sum(h) != 0:
        raise UsageError("trace constraint violated: H must sum to 0")
    A = matrix if matrix is not None else generic_traceless_matrix(len(h) - 1, prime)
    rc = A.ring
    out = rc.zero()
    for i, hi in enumerate(h):
        out = out + rc.constant(hi) * A.entries[i][i]
    return out


def _saturated(I: IdealHandle, saturate_by: str) -> IdealHandle:
    if saturate_by == "max-ideal":
        return saturate(I)
    if saturate_by == "t":
        return saturate_single(I, I.ring.var_named("t"))
    raise UsageError(f"unknown saturation choice {saturate_by!r}")


def orbit_compactification(spec: OrbitSpec, prime: int = DEFAULT_PRIME,
                           saturate_by: str = "max-ideal") -> IdealHandle:
    """saturate(homogenize(minimal-polynomial ideal))."""
    I = minimal_polynomial_ideal(spec, prime)
    return _saturated(homogenize_ideal(I, "t"), saturate_by)


def fibre_compactification(spec: FibreSpec, prime: int = DEFAULT_PRIME,
                           saturate_by: str = "max-ideal") -> IdealHandle:
    """Same, with the fibre constraint potential - lambda appended after the
    minimal-polynomial generators."""
    A = generic_traceless_matrix(spec.orbit.n, prime)
    rc = A.ring
    I = minimal_polynomial_ideal(spec.orbit, prime, matrix=A)
    pot = potential_polynomial(spec.h, prime, matrix=A)
    J = ideal(rc, list(I.generators) + [pot - rc.constant(spec.lam)])
    return _saturated(homogenize_ideal(J, "t"), saturate_by)


def critical_values(orbit: OrbitSpec, h, cap: int = 8) -> list:
    """{ <H, w(H0)> : w in the Weyl group } = all permutation pairings of the
    two diagonals; sorted, deduplicated."""
    h = tuple(h)
    if len(h) != len(orbit.h0):
        raise UsageError("H and H0 must have the same size")
    if len(set(h)) != len(h):
        raise UsageError("regularity constraint violated: H has repeated entries")
    if len(h) > cap:
        raise UsageError(f"critical-value enumeration capped at size {cap}")
    vals = {sum(hi * sig_i for hi, sig_i in zip(h, sigma))
            for sigma in permutations(orbit.h0)}
    return sorted(vals)


def expected_minimal_flag_diamond(n: int) -> HodgeDiamond:
    """Closed-form diamond of the minimal-orbit compactification for
    H0 = (n, -1, ..., -1): diagonal h^{p,p} = n+1-|n-p| on a 2n-fold,
    zeros off the diagonal."""
    if n < 1:
        raise UsageError("n must be at least 1")
    d = 2 * n
    entries = [[0] * (d + 1) for _ in range(d + 1)]
    for p in range(d + 1):
        entries[p][p] = n + 1 - abs(n - p)
    prov = [["computed"] * (d + 1) for _ in range(d + 1)]
    return HodgeDiamond(dim=d, entries=entries, provenance=prov)
