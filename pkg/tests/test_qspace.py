from __future__ import annotations

import families as fam
from gpquant import hamiltonian as hm
from gpquant import qspace
from gpquant.big_tangent import BigSection
from gpquant.calculus import KForm, pair
from gpquant.prequantization import GPData
from gpquant.scalar import Scalar


def test_horizontal_lift_annihilated_by_sigma():
    G = fam.plane_gp()
    Q = qspace.QContext(G)
    for n in fam.PLANE.coords:
        assert pair(Q.sigma, qspace.horizontal_lift(Q, fam.D(fam.PLANE, n))).is_zero()
    assert qspace.check_curvature_relation(Q).passed


def test_comutant_brackets():
    S, G, _, _ = fam.mechanics()
    Q = qspace.QContext(G)
    f = hm.representative_pair(Scalar.var("q1"), S, hm.HAM)
    h = hm.representative_pair(Scalar.var("p1") * Scalar.var("p2"), S, hm.WHAM)
    assert qspace.check_comutant(Q, f, h).passed


def test_lift_parts_on_plane():
    S, G = fam.plane_rank_one(), fam.plane_gp()
    rep = qspace.check_lift_properties(qspace.QContext(G), S)
    assert rep.passed, rep
    assert set(rep.details["parts"]) >= {"isotropy", "orthogonality", "wade-closure",
                                         "pullback-closure", "prolongation-closure",
                                         "v-automorphism", "jacobi-dirac"}


def test_wade_closure_witness_mechanics():
    # gp-valid data still leave the stable lift open under the Wade bracket
    S, G, _, _ = fam.mechanics()
    rep = qspace.wade_closure(qspace.QContext(G), S)
    assert rep.status == "fail"
    assert rep.witness["generators"] == (0, 2)
    assert rep.witness["omega_E"] == Scalar.const(-1)


def test_plane_closure_blind_to_varpi():
    # omega_E vanishes on E x E for the rank-one structure, so varpi = 0 changes nothing
    S = fam.plane_rank_one()
    assert qspace.wade_closure(qspace.QContext(GPData.of(KForm.zero(S.chart, 1))), S).passed


def test_dirac_plane_fails_closure():
    S, G = fam.plane_dirac(), fam.plane_gp()
    assert not qspace.wade_closure(qspace.QContext(G), S).passed


def test_span_equalities():
    S, G = fam.plane_rank_one(), fam.plane_gp()
    Q = qspace.QContext(G)
    pull = qspace.lift_structure(Q, S, "pullback").gens
    graph = qspace.pullback_graph_two_form(Q, fam.plane_lambda(), [fam.D(fam.PLANE, "p")])
    assert qspace.span_equal(pull, graph).passed
    wrong = graph[:1] + [BigSection.of(Q.chart, Q.V * 2 + Q.horizontal(fam.D(fam.PLANE, "q")))]
    assert qspace.span_equal(pull, wrong).status == "fail"
