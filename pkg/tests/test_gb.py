"""Groebner engine and ideal calculus."""

import random

import pytest

from orbit_hodge.gb import (
    buchberger,
    eliminate,
    homogenize_ideal,
    ideal,
    ideal_membership,
    intersect,
    normal_form,
    saturate,
    saturate_single,
)
from orbit_hodge.poly import LEX, Polynomial, UsageError, parse_polynomial, ring


@pytest.fixture
def rc():
    return ring(["x", "y", "z"], 32749)


def P(rc, s):
    return parse_polynomial(rc, s)


def texts(polys):
    return [g.text() for g in polys]


# -- normal form -------------------------------------------------------------


def test_normal_form_examples(rc):
    assert normal_form(P(rc, "x^2"), [P(rc, "x")], rc.order).is_zero()
    f = P(rc, "x^2*y + y")
    assert normal_form(f, [], rc.order) == f
    assert normal_form(f, [P(rc, "x^2 - 1")], rc.order) == P(rc, "2*y")


def test_normal_form_difference_in_ideal(rc):
    basis = [P(rc, "x^2 + y"), P(rc, "x*y - z")]
    f = P(rc, "x^3*y + x*z + y^2")
    r = normal_form(f, basis, rc.order)
    assert ideal_membership(f - r, ideal(rc, basis))


# -- buchberger --------------------------------------------------------------


def test_buchberger_single_generator(rc):
    assert texts(buchberger([P(rc, "x")], rc.order)) == ["x"]


def test_buchberger_lex_linear(rc):
    gb = buchberger([P(rc, "x - y"), P(rc, "y - z")], LEX)
    assert texts(gb) == ["y - z", "x - z"]


def test_buchberger_grevlex_spair(rc):
    gb = buchberger([P(rc, "x^2 + y^2"), P(rc, "x*y")], rc.order)
    assert sorted(texts(gb)) == ["x*y", "x^2 + y^2", "y^3"]


def test_buchberger_unit_ideal(rc):
    gb = buchberger([P(rc, "x"), P(rc, "x + 1")], rc.order)
    assert texts(gb) == ["1"]


def test_buchberger_output_sorted_ascending(rc):
    gb = buchberger([P(rc, "x^2 + y^2"), P(rc, "x*y")], rc.order)
    keys = [rc.order.key(g.lm()) for g in gb]
    assert keys == sorted(keys)


def test_buchberger_idempotent_on_output(rc):
    gens = [P(rc, "x^2 - y*z"), P(rc, "x*z - y^2")]
    gb = buchberger(gens, rc.order)
    assert buchberger(gb, rc.order) == gb


def _random_poly(rc, rng):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        m = tuple(rng.randint(0, 3) for _ in range(3))
        if sum(m) > 3:
            continue
        terms[m] = rng.randint(1, 32748)
    return Polynomial(rc, terms)


def test_spair_closure_on_random_ideals(rc):
    """Every S-polynomial of a computed basis must reduce to zero."""
    rng = random.Random(271828)
    for _ in range(60):
        gens = [_random_poly(rc, rng) for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        gb = buchberger(gens, rc.order)
        for i in range(len(gb)):
            for j in range(i + 1, len(gb)):
                lcm = tuple(max(a, b) for a, b in zip(gb[i].lm(), gb[j].lm()))
                ui = tuple(a - b for a, b in zip(lcm, gb[i].lm()))
                uj = tuple(a - b for a, b in zip(lcm, gb[j].lm()))
                s = gb[i].mul_term(ui, 1) - gb[j].mul_term(uj, 1)
                assert normal_form(s, gb, rc.order).is_zero()


def test_membership(rc):
    I = ideal(rc, [P(rc, "x")])
    assert ideal_membership(P(rc, "x^2"), I)
    assert not ideal_membership(P(rc, "1"), I)
    J = ideal(rc, [P(rc, "x^2 + y^2"), P(rc, "x*y")])
    assert ideal_membership(P(rc, "y^3"), J)


# -- elimination -------------------------------------------------------------


def test_eliminate_twisted_cubic_curve(rc):
    I = ideal(rc, [P(rc, "y - x^2"), P(rc, "z - x^3")])
    E = eliminate(I, ["x"])
    assert E == ideal(rc, [P(rc, "z^2 - y^3")])
    for g in E.generators:
        assert not any(m[0] for m in g.terms)
        assert ideal_membership(g, I)


def test_eliminate_nothing_is_identity(rc):
    I = ideal(rc, [P(rc, "x*y - 1")])
    assert eliminate(I, []) == I


def test_eliminate_everything_from_nonempty_variety():
    rc1 = ring(["x"], 32749)
    E = eliminate(ideal(rc1, [parse_polynomial(rc1, "x - 1")]), ["x"])
    assert E.is_zero()


# -- saturation and intersection ---------------------------------------------


def test_saturate_examples():
    rc = ring(["x", "y", "t"], 32749)
    I = ideal(rc, [parse_polynomial(rc, "x*t"), parse_polynomial(rc, "y*t")])
    S = saturate(I, ideal(rc, [parse_polynomial(rc, "t")]))
    assert S == ideal(rc, [parse_polynomial(rc, "x"), parse_polynomial(rc, "y")])


def test_saturate_unit(rc):
    S = saturate(ideal(rc, [P(rc, "x^2")]), ideal(rc, [P(rc, "x")]))
    assert texts(S.groebner_basis()) == ["1"]


def test_saturate_already_saturated(rc):
    I = ideal(rc, [P(rc, "x")])
    assert saturate(I, ideal(rc, [P(rc, "y")])) == I


def test_saturate_rejects_zero(rc):
    with pytest.raises(UsageError):
        saturate(ideal(rc, [P(rc, "x")]), ideal(rc, []))


def test_saturate_idempotent_random(rc):
    rng = random.Random(31415)
    J = ideal(rc, [P(rc, "x"), P(rc, "y"), P(rc, "z")])
    for _ in range(20):
        gens = [_random_poly(rc, rng) for _ in range(2)]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        I = ideal(rc, gens)
        S1 = saturate(I, J)
        assert saturate(S1, J) == S1


def test_intersect(rc):
    I = ideal(rc, [P(rc, "x")])
    J = ideal(rc, [P(rc, "y")])
    K = intersect(I, J)
    assert K == ideal(rc, [P(rc, "x*y")])


def test_saturate_single_matches_saturate(rc):
    I = ideal(rc, [P(rc, "x^2*y")])
    g = P(rc, "x")
    assert saturate_single(I, g) == saturate(I, ideal(rc, [g]))


# -- homogenization ----------------------------------------------------------


def test_homogenize_examples():
    rc = ring(["x", "y", "t"], 32749)
    I = ideal(rc, [parse_polynomial(rc, "x^2 + y")])
    H = homogenize_ideal(I, "t")
    assert texts(H.generators) == ["x^2 + y*t"]
    # homogeneous generators pass through unchanged
    I2 = ideal(rc, [parse_polynomial(rc, "x*y")])
    assert texts(homogenize_ideal(I2, "t").generators) == ["x*y"]
    # the fibre constraint pattern
    rc2 = ring(["x_1", "x_2", "t"], 32749)
    I3 = ideal(rc2, [parse_polynomial(rc2, "x_1 - x_2 - 1")])
    assert texts(homogenize_ideal(I3, "t").generators) == ["x_1 - x_2 - t"]


def test_homogenize_rejects_t_in_generator():
    rc = ring(["x", "t"], 32749)
    with pytest.raises(UsageError):
        homogenize_ideal(ideal(rc, [parse_polynomial(rc, "x*t")]), "t")


def test_homogenize_dehomogenize_roundtrip():
    rc = ring(["x", "y", "t"], 32749)
    gens = [parse_polynomial(rc, s) for s in ("x^2 + y", "x*y - 1", "y^3 - x")]
    H = homogenize_ideal(ideal(rc, gens), "t")
    ti = rc.names.index("t")
    back = [g.specialize({ti: 1}) for g in H.generators]
    assert back == gens


# -- serialization -----------------------------------------------------------


def test_ideal_json_roundtrip(rc):
    from orbit_hodge.gb import IdealHandle

    I = ideal(rc, [P(rc, "x^2 - y*z"), P(rc, "3*x + 1")])
    J = IdealHandle.from_json(I.to_json())
    assert J == I
    assert texts(J.generators) == texts(I.generators)
