"""Adjoint-orbit domain layer: matrices, ideals, potentials, critical values."""

import pytest

from orbit_hodge.gb import homogenize_ideal, ideal, saturate
from orbit_hodge.hodge import hodge_diamond
from orbit_hodge.invariants import invariant_report
from orbit_hodge.orbit import (
    FibreSpec,
    OrbitSpec,
    critical_values,
    expected_minimal_flag_diamond,
    fibre_compactification,
    generic_traceless_matrix,
    minimal_polynomial_ideal,
    orbit_compactification,
    potential_polynomial,
)
from orbit_hodge.poly import UsageError


def entry_texts(A):
    return [[e.text() for e in row] for row in A.entries]


def test_generic_matrix_3x3_layout():
    A = generic_traceless_matrix(2)
    assert entry_texts(A) == [
        ["x_1", "y_1", "y_2"],
        ["z_1", "x_2", "y_3"],
        ["z_2", "z_3", "-x_1 - x_2"],
    ]
    assert A.trace().is_zero()
    assert A.ring.names[-1] == "t"


def test_generic_matrix_2x2():
    A = generic_traceless_matrix(1)
    assert entry_texts(A) == [["x_1", "y_1"], ["z_1", "-x_1"]]


def test_generic_matrix_rejects_zero():
    with pytest.raises(UsageError):
        generic_traceless_matrix(0)


def test_orbit_spec_validation():
    OrbitSpec((2, -1, -1))
    with pytest.raises(UsageError):
        OrbitSpec((1, 1))
    with pytest.raises(UsageError):
        OrbitSpec(())
    assert OrbitSpec.parse("2,-1,-1").h0 == (2, -1, -1)
    with pytest.raises(UsageError):
        OrbitSpec.parse("2,a,b")


def test_fibre_spec_regularity():
    orbit = OrbitSpec((2, -1, -1))
    FibreSpec(orbit, (1, -1, 0), 1)
    with pytest.raises(UsageError):
        FibreSpec(orbit, (1, 1, -2), 0)
    with pytest.raises(UsageError):
        FibreSpec(orbit, (1, -1), 0)


def test_minimal_polynomial_sl2():
    I = minimal_polynomial_ideal(OrbitSpec((1, -1)))
    # A^2 - Id is (x^2 + yz - 1) times the identity
    assert {g.text() for g in I.generators} == {"x_1^2 + y_1*z_1 - 1"}


def test_minimal_polynomial_nilpotent_spec():
    I = minimal_polynomial_ideal(OrbitSpec((0, 0)))
    assert sorted(g.text() for g in I.generators) == ["-x_1", "x_1", "y_1", "z_1"]


def test_minimal_polynomial_sl3_degree():
    I = minimal_polynomial_ideal(OrbitSpec((2, -1, -1)))
    assert len(I.generators) == 9
    assert all(g.degree() == 2 for g in I.generators)


def test_potential():
    assert potential_polynomial((1, -1, 0)).text() == "x_1 - x_2"
    assert potential_polynomial((1, -1)).text() == "2*x_1"
    with pytest.raises(UsageError):
        potential_polynomial((1, 1))


def test_sl2_orbit_is_smooth_quadric():
    I = orbit_compactification(OrbitSpec((1, -1)))
    assert [g.text() for g in I.groebner_basis()] == ["x_1^2 + y_1*z_1 - t^2"]
    rep = invariant_report(I)
    assert rep.proj_dim == 2 and rep.degree == 2 and rep.smooth


def test_sl2_fibre_is_conic():
    J = fibre_compactification(FibreSpec(OrbitSpec((1, -1)), (1, -1), 0))
    rep = invariant_report(J)
    assert rep.proj_dim == 1 and rep.smooth
    assert hodge_diamond(J, report=rep).rows() == [[1], [0, 0], [1]]


def test_generator_permutation_invariance():
    """Saturation of the homogenized ideal is generator-order independent."""
    spec = OrbitSpec((1, -1))
    I = minimal_polynomial_ideal(spec)
    rc = I.ring
    fwd = saturate(homogenize_ideal(I, "t"))
    rev = saturate(homogenize_ideal(ideal(rc, list(reversed(I.generators))), "t"))
    assert fwd == rev


def test_critical_values_paper_case():
    assert critical_values(OrbitSpec((2, -1, -1)), (1, -1, 0)) == [-3, 0, 3]


def test_critical_values_sl2():
    assert critical_values(OrbitSpec((1, -1)), (1, -1)) == [-2, 2]


def test_critical_values_contains_pairing():
    h0, h = (3, -1, -2), (1, 0, -1)
    vals = critical_values(OrbitSpec(h0), h)
    assert sum(a * b for a, b in zip(h, h0)) in vals


def test_critical_values_weyl_invariance():
    base = critical_values(OrbitSpec((2, -1, -1)), (1, -1, 0))
    permuted = critical_values(OrbitSpec((-1, 2, -1)), (1, -1, 0))
    assert base == permuted


def test_critical_values_validation():
    with pytest.raises(UsageError):
        critical_values(OrbitSpec((1, -1)), (0, 0))
    with pytest.raises(UsageError):
        critical_values(OrbitSpec((1, -1)), (1, -1, 0))


def test_expected_minimal_flag_diamond():
    d1 = expected_minimal_flag_diamond(1)
    assert d1.dim == 2
    assert [d1.entries[p][p] for p in range(3)] == [1, 2, 1]
    d2 = expected_minimal_flag_diamond(2)
    assert [d2.entries[p][p] for p in range(5)] == [1, 2, 3, 2, 1]
    assert all(d2.entries[p][q] == 0
               for p in range(5) for q in range(5) if p != q)
    with pytest.raises(UsageError):
        expected_minimal_flag_diamond(0)


def test_sl2_orbit_matches_flag_formula():
    I = orbit_compactification(OrbitSpec((1, -1)))
    dia = hodge_diamond(I)
    assert dia.entries == expected_minimal_flag_diamond(1).entries


def test_saturate_by_t_agrees_on_sl2():
    spec = OrbitSpec((1, -1))
    a = orbit_compactification(spec, saturate_by="max-ideal")
    b = orbit_compactification(spec, saturate_by="t")
    assert a == b
