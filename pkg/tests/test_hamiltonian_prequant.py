from __future__ import annotations

import pytest

import families as fam
from gpquant import hamiltonian as hm
from gpquant import prequantization as pq
from gpquant.calculus import KForm, VectorField
from gpquant.errors import NotClosed, NotInBundle
from gpquant.prequantization import GPData, LineSection
from gpquant.scalar import C, I_UNIT, Scalar

q1, q2, p1, p2 = (Scalar.var(n) for n in ("q1", "q2", "p1", "p2"))


@pytest.fixture(scope="module")
def mech():
    return fam.mechanics()


def test_verify_rejects_wrong_field(mech):
    S = mech[0]
    with pytest.raises(NotInBundle):
        hm.verify_hamiltonian(q1, VectorField.coordinate(S.chart, "p2"), S, hm.HAM)


def test_representative_and_shift(mech):
    S = mech[0]
    hp = hm.representative_pair(p1, S, hm.WHAM)
    assert hp.Xf == -VectorField.coordinate(S.chart, "q1")
    assert hm.verify_hamiltonian(p1, hp.Xf, S, hm.WHAM) == hp


def test_poisson_bracket_and_leibniz(mech):
    S = mech[0]
    f = hm.representative_pair(q1, S, hm.HAM)
    g = hm.representative_pair(q2, S, hm.HAM)
    h = hm.representative_pair(p1 * p2, S, hm.WHAM)
    assert hm.poisson_bracket(f, hm.representative_pair(p1, S, hm.WHAM)) == Scalar.const(1)
    assert hm.check_leibniz(f, g, h).passed


def test_operator_formula(mech):
    S, G = mech[0], mech[1]
    hp = hm.representative_pair(q2, S, hm.HAM)
    phi = p2 ** 2 + q1
    assert pq.quantum_operator(G, hp, LineSection(phi)).phi == p2 * 2 + C * q2 * phi


def test_gp_failure_and_commutator_defect():
    S = fam.plane_rank_one()
    G = GPData.of(KForm.zero(S.chart, 1))
    rep = pq.check_gp_condition(G, S)
    assert rep.status == "fail"
    assert rep.witness["residual"] == Scalar.const(1)
    f = hm.representative_pair(fam.q, S, hm.HAM)
    h = hm.representative_pair(fam.p, S, hm.WHAM)
    dv, ds = pq.commutator_defect(G, f, h)
    assert dv.is_zero()
    assert ds == C * pq.gp_residual(G, S, f.section, h.section)
    assert not ds.is_zero()
    assert pq.commutator_check(pq.gauge_shift(fam.plane_gp(), fam.dx(fam.PLANE, "p")), f, h).passed


def test_vectorial_form_keeps_operators(mech):
    S, G = mech[0], mech[1]
    G2 = GPData(G.varpi, VectorField.coordinate(S.chart, "q2"), KForm.coordinate(S.chart, "p1") * q1)
    hp = hm.representative_pair(q1, S, hm.HAM)
    s = LineSection(p1 * q2)
    assert pq.quantum_operator(G2, hp, s) == pq.quantum_operator(pq.vectorial(G2), hp, s)


def test_integrality_variants():
    S = fam.plane_rank_one()
    lam = fam.plane_lambda()
    U = VectorField.coordinate(S.chart, "q") * fam.p
    Xi = KForm.zero(S.chart, 2) - lam
    assert pq.integrality_variants_agree(S, U, Xi).passed
    # the +omega spelling disagrees by 2 beta(X) somewhere
    assert not pq.integrality_variants_agree(S, U, Xi, ("direct", "lie-plus")).passed
    S3 = fam.r3_nonfoliation()
    with pytest.raises(NotClosed):
        pq.check_integrality(S3, VectorField.zero(fam.R3), KForm(fam.R3, 2, {("x", "y"): fam.z}))


def test_connection_form_must_be_real():
    ch = fam.PLANE
    with pytest.raises(ValueError):
        GPData.of(fam.dx(ch, "q") * I_UNIT)
