from __future__ import annotations

import random
from fractions import Fraction

import pytest

import families as fam
from gpquant.big_tangent import BigSection, courant_bracket, pairing_g, pairing_omega
from gpquant.calculus import KForm, VectorField, differential, flat
from gpquant.calculus import exterior_derivative as d
from gpquant.errors import IsotropyViolation, OrthogonalityViolation, RankDeficiency
from gpquant.sampling import random_combination, random_form, random_vector_field
from gpquant.scalar import Scalar
from gpquant.structures import (INDET, NO, YES, check_integrable, check_sigma_closed, in_span,
                                validate_structure)


def _jacobiator(a, b, c):
    return (courant_bracket(courant_bracket(a, b), c) + courant_bracket(courant_bracket(b, c), a)
            + courant_bracket(courant_bracket(c, a), b))


def _torsion(a, b, c):
    return (pairing_g(courant_bracket(a, b), c) + pairing_g(courant_bracket(b, c), a)
            + pairing_g(courant_bracket(c, a), b))


def test_jacobiator_is_exact_differential_of_torsion():
    rng = random.Random(7)
    ch = fam.R3
    for _ in range(10):
        lam = random_form(rng, ch, 2, degree=1)
        secs = [BigSection(X, flat(lam, X)) for X in (random_vector_field(rng, ch, degree=1) for _ in range(3))]
        J = _jacobiator(*secs)
        assert J.vf.is_zero()
        assert J.form == differential(ch, _torsion(*secs) * Fraction(1, 3))


def test_jacobi_inside_a_closed_graph():
    rng = random.Random(8)
    ch = fam.R3
    for _ in range(10):
        lam = d(random_form(rng, ch, 1, degree=2))
        secs = [BigSection(X, flat(lam, X)) for X in (random_vector_field(rng, ch, degree=1) for _ in range(3))]
        assert _jacobiator(*secs).is_zero()


def test_jacobi_on_structure_sections():
    rng = random.Random(9)
    S = fam.mechanics()[0]
    for _ in range(3):
        a, b = (random_combination(rng, S.gensE) for _ in range(2))
        c = random_combination(rng, S.gensEp)
        assert _torsion(a, b, c).is_zero()
        assert _jacobiator(a, b, c).is_zero()


def test_pairings():
    ch = fam.PLANE
    a = BigSection(fam.D(ch, "q"), fam.dx(ch, "p"))
    b = BigSection(fam.D(ch, "p"), fam.dx(ch, "q") * 3)
    # (alpha(Y) - beta(X)) / 2 and (alpha(Y) + beta(X)) / 2
    assert pairing_omega(a, b) == Scalar.const(-1)
    assert pairing_g(a, b) == Scalar.const(2)


def test_dichotomy_witness():
    rep = check_integrable(fam.r3_nonfoliation())
    assert rep.status == "fail"
    assert rep.witness["bracket"].vf == fam.D(fam.R3, "z")
    assert check_integrable(fam.plane_dirac()).passed
    assert check_integrable(fam.mechanics()[0]).passed


def test_validation_errors():
    ch = fam.PLANE
    Dq, Dp, dq, dp = fam.D(ch, "q"), fam.D(ch, "p"), fam.dx(ch, "q"), fam.dx(ch, "p")
    with pytest.raises(IsotropyViolation):
        validate_structure([BigSection(Dq, dq)], [BigSection(Dq, dq)] * 3)
    with pytest.raises(RankDeficiency):
        validate_structure([BigSection(Dp, -dq)], [BigSection(Dp, -dq)])
    with pytest.raises(OrthogonalityViolation):
        validate_structure([BigSection(Dp, -dq)],
                           [BigSection(Dq, dp), BigSection(Dp, -dq), BigSection(Dq, KForm.zero(ch, 1))])


def test_in_span_statuses():
    ch = fam.PLANE
    q = fam.q
    g = BigSection(fam.D(ch, "q") * q, KForm.zero(ch, 1))
    assert in_span(g * (q + 1), [g]).status == YES
    assert in_span(BigSection.of(ch, fam.D(ch, "q")), [g]).status == INDET
    assert in_span(BigSection.of(ch, fam.D(ch, "p")), [g]).status == NO


def test_sigma_closed_on_mechanics():
    S, G, P, sigma = fam.mechanics()
    assert check_sigma_closed(P, sigma).passed
    # the extra generator q2 dp1 brackets into something only off q1 q2 = 0
    rep = check_sigma_closed(P, sigma + [KForm(S.chart, 1, {("p1",): Scalar.var("q2")})])
    assert rep.status == "indeterminate"
    assert rep.witness["locus"] == Scalar.var("q1") * Scalar.var("q2")


def test_vector_field_membership_helpers():
    ch = fam.R3
    X = VectorField.coordinate(ch, "x")
    assert in_span(X * fam.y, [X]).status == YES
