from __future__ import annotations

import pytest

import families as fam
from gpquant import hamiltonian as hm
from gpquant import polarization as pol
from gpquant.big_tangent import BigSection, courant_bracket
from gpquant.errors import NotInBundle, NotOnLeaf, StructureError
from gpquant.prequantization import LineSection
from gpquant.scalar import Scalar

q, p, u = (Scalar.var(n) for n in ("q", "p", "u"))


@pytest.fixture(scope="module")
def setup():
    return fam.coordinate_polarization()


def _sec(vf=None, form=None):
    return BigSection.of(fam.QPU, vf, form)


def test_polarization_passes(setup):
    S, G, P = setup
    rep = pol.check_polarization(S, P)
    assert rep.passed, rep


def test_omega_violation_is_caught(setup):
    S, G, P = setup
    extra = _sec(fam.D(fam.QPU, "q"), fam.dx(fam.QPU, "p"))
    bad = pol.PolarizationSpec(P.gensP, P.gensPp + [extra], P.gensTMcapE, P.gensTMcapEp)
    rep = pol.check_polarization(S, bad)
    assert rep.status == "fail"
    assert rep.witness["part"] == "omega-vanishes"
    assert rep.witness["value"] == Scalar.const(-1)


def test_membership_validated(setup):
    S, G, P = setup
    bad = pol.PolarizationSpec([_sec(fam.D(fam.QPU, "q"))], P.gensPp)
    with pytest.raises(StructureError):
        pol.validate_polarization(S, bad)


def test_polarized_sections(setup):
    S, G, P = setup
    assert pol.check_polarized_section(G, P, LineSection(q ** 3 + 1)).passed
    rep = pol.check_polarized_section(G, P, LineSection(p))
    assert rep.status == "fail" and rep.witness["residual"] == Scalar.const(1)
    assert pol.check_section_inclusion(G, P, [LineSection(q), LineSection(p)]).passed
    rep = pol.check_omega_necessity(G, S, P, [LineSection(q), LineSection(q * q - 1)])
    assert rep.passed and rep.details["nonzero_polarized"] == 2


def test_restriction_rejects_unpolarized_function(setup):
    S, G, P = setup
    hp = hm.representative_pair(p * p, S, hm.WHAM)
    rep = pol.check_operator_restriction(G, S, P, hp, LineSection(q))
    assert rep.status == "fail"
    assert rep.witness["precondition"].startswith("polarized")


def test_restriction_images(setup):
    S, G, P = setup
    hp = hm.representative_pair(q * p, S, hm.WHAM)
    rep = pol.check_operator_restriction(G, S, P, hp, LineSection(q ** 2))
    assert rep.passed


def test_leaf_brackets(setup):
    S, G, P = setup
    a, b = S.gensE[0], S.gensEp[1] * q
    leaf = {"u": 0}
    br = pol.leaf_bracket(S, a, b, leaf)
    assert br == courant_bracket(a, b).subs({"u": Scalar.const(0)})
    assert pol.check_leaf_extension_independence(S, a, b, leaf, [u, u * q, 0, u]).passed
    with pytest.raises(ValueError):
        pol.check_leaf_extension_independence(S, a, b, leaf, [q])
    with pytest.raises(NotOnLeaf):
        pol.leaf_bracket(S, a, b, {"q": 0})
    with pytest.raises(NotInBundle):
        pol.leaf_bracket(S, _sec(fam.D(fam.QPU, "u")), b, leaf)
    assert pol.check_pointwise_polarization(S, P, leaf).passed
