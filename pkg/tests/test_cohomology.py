"""Sheaf cohomology against the Bott-formula oracle and classical facts."""

from math import comb

import pytest

from orbit_hodge.cohomology import ext_graded_dim, sheaf_cohomology_dim
from orbit_hodge.gb import ideal
from orbit_hodge.invariants import hilbert_series
from orbit_hodge.poly import parse_polynomial, ring
from orbit_hodge.resolve import (
    GradedMap,
    PresentedModule,
    free_module,
    free_presented,
    presented_from_ideal,
)


def bott_line_bundle(n: int, d: int, q: int) -> int:
    """Closed-form h^q(P^n, O(d)), implemented independently from binomials."""
    if q == 0:
        return comb(n + d, n) if d >= 0 else 0
    if q == n:
        return comb(-d - 1, n) if -d - 1 >= n else 0
    return 0


def test_ext_of_free_module():
    rc = ring(["x", "y", "z"], 32749)
    S = free_presented(rc, [0])
    assert ext_graded_dim(S, 0, 0) == 1
    assert ext_graded_dim(S, 0, 2) == 6
    for i in (1, 2, 3):
        assert ext_graded_dim(S, i, 0) == 0


def test_ext_koszul_self_duality():
    rc = ring(["x", "y"], 32749)
    M = presented_from_ideal(
        ideal(rc, [parse_polynomial(rc, "x"), parse_polynomial(rc, "y")]))
    assert ext_graded_dim(M, 2, -2) == 1
    assert ext_graded_dim(M, 2, -1) == 0
    assert ext_graded_dim(M, 1, 0) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bott_formula_sweep(n):
    rc = ring([f"x_{i}" for i in range(n + 1)], 32749)
    S = free_presented(rc, [0])
    for d in range(-5, 6):
        for q in range(n + 1):
            assert sheaf_cohomology_dim(S, q, d) == bott_line_bundle(n, d, q), \
                (n, d, q)


def test_twists_and_bott_agree():
    # the same sweep realized through nonzero module twists
    rc = ring(["x", "y"], 32749)
    for a in (-2, 1, 3):
        M = free_presented(rc, [a])
        for q in (0, 1):
            for d in (-3, 0, 2):
                assert sheaf_cohomology_dim(M, q, d) == bott_line_bundle(1, d - a, q)


def quadric_surface():
    rc = ring(["x", "y", "z", "w"], 32749)
    return presented_from_ideal(
        ideal(rc, [parse_polynomial(rc, "x^2 + y^2 + z^2 + w^2")]))


def test_serre_duality_on_quadric():
    """h^q(O_X(d)) = h^{2-q}(O_X(-2-d)) since the quadric has omega = O(-2)."""
    Q = quadric_surface()
    for d in range(-2, 3):
        for q in range(3):
            lhs = sheaf_cohomology_dim(Q, q, d)
            rhs = sheaf_cohomology_dim(Q, 2 - q, -2 - d)
            assert lhs == rhs, (d, q)


def test_euler_characteristic_is_hilbert_polynomial():
    rc = ring(["x", "y", "z"], 32749)
    tests = [
        presented_from_ideal(ideal(rc, [parse_polynomial(rc, "x^3 + y^3 + z^3")])),
        presented_from_ideal(ideal(rc, [parse_polynomial(rc, "x^2 + y*z")])),
        free_presented(rc, [0]),
    ]
    ideals = [
        ideal(rc, [parse_polynomial(rc, "x^3 + y^3 + z^3")]),
        ideal(rc, [parse_polynomial(rc, "x^2 + y*z")]),
        ideal(rc, []),
    ]
    for M, I in zip(tests, ideals):
        hs = hilbert_series(I)
        for d in range(-3, 4):
            chi = sum((-1) ** q * sheaf_cohomology_dim(M, q, d) for q in range(3))
            assert chi == hs.hilbert_polynomial_at(d), (I, d)


def test_presentation_independence():
    """A redundant generator with its trivial relation changes nothing."""
    rc = ring(["x", "y", "z"], 32749)
    f = parse_polynomial(rc, "x^2 + y*z")
    M = presented_from_ideal(ideal(rc, [f]))
    # same quotient, presented with generators (1, x) of S and relations
    # binding the second generator to x times the first
    tgt = free_module(rc, [0, 1])
    src = free_module(rc, [1, 2, 3])
    x = (1, 0, 0)
    one = (0, 0, 0)
    cols = [
        {(0, x): 1, (1, one): rc.field.modulus - 1},   # x*e0 - e1
        {(0, f.lm()): 1, **{(0, m): c for m, c in f.terms.items() if m != f.lm()}},
        {(1, m): c for m, c in f.terms.items()},       # f*e1
    ]
    cols[1] = {(0, m): c for m, c in f.terms.items()}
    N = PresentedModule(GradedMap(src, tgt, cols))
    for q in range(3):
        for d in (-1, 0, 1, 2):
            assert (sheaf_cohomology_dim(M, q, d)
                    == sheaf_cohomology_dim(N, q, d)), (q, d)


def test_vanishing_above_dimension():
    Q = quadric_surface()
    assert sheaf_cohomology_dim(Q, 3, 0) == 0
    assert sheaf_cohomology_dim(Q, 5, -4) == 0
