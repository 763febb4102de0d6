"""Hilbert series, dimension, degree, and the smoothness test."""

import pytest

from orbit_hodge.gb import ideal
from orbit_hodge.invariants import (
    euler_char_structure_sheaf,
    hilbert_series,
    invariant_report,
    numerical_invariants,
    singular_locus_codim,
)
from orbit_hodge.poly import UsageError, parse_polynomial, ring


def P(rc, s):
    return parse_polynomial(rc, s)


def test_hilbert_series_zero_ideal():
    rc = ring(["x", "y", "z"], 32749)
    hs = hilbert_series(ideal(rc, []))
    assert hs.numerator == ((0, 1),)  # the constant polynomial 1
    # matches C(d+2,2)
    assert [hs.hilbert_function(d) for d in range(5)] == [1, 3, 6, 10, 15]


def test_hilbert_series_principal():
    rc = ring(["x", "y"], 32749)
    hs = hilbert_series(ideal(rc, [P(rc, "x^2")]))
    # (1 - T^2)/(1-T)^2 = (1+T)/(1-T): values 1, 2, 2, 2, ...
    assert [hs.hilbert_function(d) for d in range(5)] == [1, 2, 2, 2, 2]


def test_hilbert_series_rejects_inhomogeneous():
    rc = ring(["x", "y"], 32749)
    with pytest.raises(UsageError):
        hilbert_series(ideal(rc, [P(rc, "x^2 - 1")]))


def twisted_cubic():
    rc = ring(["a", "b", "c", "d"], 32749)
    return ideal(rc, [P(rc, "b^2 - a*c"), P(rc, "b*c - a*d"), P(rc, "c^2 - b*d")])


def test_twisted_cubic_invariants():
    I = twisted_cubic()
    pd, deg = numerical_invariants(I)
    assert (pd, deg) == (1, 3)
    hs = hilbert_series(I)
    # rational normal curve of degree 3: h(d) = 3d + 1
    assert [hs.hilbert_function(d) for d in range(7)] == [1, 4, 7, 10, 13, 16, 19]


def test_hilbert_function_matches_direct_count():
    """Series values agree with brute-force standard-monomial counts."""
    rc = ring(["x", "y", "z"], 32749)
    I = ideal(rc, [P(rc, "x^2 - y*z"), P(rc, "x*y^2")])
    gb = I.groebner_basis()
    leads = [g.lm() for g in gb]
    hs = hilbert_series(I)
    for d in range(7):
        standard = [
            m for m in rc.monomials_of_degree(d)
            if not any(all(a >= b for a, b in zip(m, lt)) for lt in leads)
        ]
        assert hs.hilbert_function(d) == len(standard)


def test_empty_proj_reports_minus_one():
    rc = ring(["x", "y"], 32749)
    irrelevant = ideal(rc, [P(rc, "x"), P(rc, "y")])
    pd, deg = numerical_invariants(irrelevant)
    assert pd == -1 and deg is None


def test_zero_ideal_is_projective_space():
    rc = ring([f"v_{i}" for i in range(9)], 32749)
    pd, _ = numerical_invariants(ideal(rc, []))
    assert pd == 8


def test_proj_dim_invariant_under_gb_swap():
    I = twisted_cubic()
    J = ideal(I.ring, I.groebner_basis())
    assert numerical_invariants(I) == numerical_invariants(J)


def test_smooth_quadric_threefold_cone():
    rc = ring(["x", "y", "z", "w"], 32749)
    I = ideal(rc, [P(rc, "x^2 + y^2 + z^2 + w^2")])
    assert singular_locus_codim(I) == 4
    rep = invariant_report(I)
    assert rep.smooth and rep.proj_dim == 2 and rep.degree == 2


def test_nodal_cubic_is_singular():
    rc = ring(["x", "y", "z"], 32749)
    I = ideal(rc, [P(rc, "y^2*z - x^3 - x^2*z")])
    assert singular_locus_codim(I) == 2
    rep = invariant_report(I)
    assert not rep.smooth


def test_projective_space_is_smooth():
    rc = ring(["x", "y", "z"], 32749)
    rep = invariant_report(ideal(rc, []))
    assert rep.smooth and rep.sing_codim == 3


def test_euler_char():
    rc = ring(["x", "y", "z", "w"], 32749)
    assert euler_char_structure_sheaf(ideal(rc, [])) == 1
    quadric = ideal(rc, [P(rc, "x^2 + y^2 + z^2 + w^2")])
    assert euler_char_structure_sheaf(quadric) == 1
    rc3 = ring(["x", "y", "z"], 32749)
    conic = ideal(rc3, [P(rc3, "x^2 + y*z")])
    assert euler_char_structure_sheaf(conic) == 1
    # elliptic curve: chi = 1 - g = 0
    cubic = ideal(rc3, [P(rc3, "x^3 + y^3 + z^3")])
    assert euler_char_structure_sheaf(cubic) == 0


def test_report_json():
    rc = ring(["x", "y", "z"], 32749)
    rep = invariant_report(ideal(rc, [P(rc, "x^2 + y*z")]))
    doc = rep.to_json()
    assert doc == {
        "proj_dim": 1,
        "degree": 2,
        "sing_codim": 3,
        "smooth": True,
        "ambient_dim": 2,
    }
