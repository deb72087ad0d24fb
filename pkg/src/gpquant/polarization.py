"""Real polarizations of an integrable big-isotropic structure.

A polarization is given by generator lists; ``P`` and ``P'`` are the spans
over polynomials.  Since ``P`` lies in E and ``P'`` in E', brackets between
the two families behave like a Lie algebroid bracket, so closure can be
checked on generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .big_tangent import BigSection, courant_bracket, pairing_omega
from .errors import IndeterminateExpansion, NotInBundle, NotOnLeaf, StructureError
from .hamiltonian import HAM, HamiltonianPair
from .prequantization import GPData, LineSection, quantum_operator, theta_eval
from .calculus import pair
from .report import CheckReport, combine, fail, ok
from .scalar import C, Scalar, as_scalar
from .structures import INDET, NO, BigIsoStructure, in_span

P_FAMILY, PP_FAMILY = "P", "Pp"


@dataclass(frozen=True)
class PolarizationSpec:
    gensP: List[BigSection]
    gensPp: List[BigSection]
    gensTMcapE: List[BigSection] = field(default_factory=list)
    gensTMcapEp: List[BigSection] = field(default_factory=list)

    @classmethod
    def dirac(cls, gensP, gensTMcapE=()):
        """Single family for a Dirac structure: ``P' = P``."""
        return cls(list(gensP), list(gensP), list(gensTMcapE), list(gensTMcapE))

    def family(self, which: str) -> List[BigSection]:
        if which == P_FAMILY:
            return self.gensP
        if which == PP_FAMILY:
            return self.gensPp
        raise ValueError(f"unknown family {which!r}")


def _require_span(label, gens, target, what):
    for i, s in enumerate(gens):
        mem = in_span(s, target)
        if mem.status == NO:
            return fail(label, generator=i, reason=f"not in {what}")
        if mem.status == INDET:
            raise IndeterminateExpansion(f"{label}: generator {i} in {what} only off the locus", mem.locus)
    return ok(label)


def validate_polarization(S: BigIsoStructure, P: PolarizationSpec) -> PolarizationSpec:
    """The invariants of the input lists; raises ``StructureError`` on violation."""
    for lst, target, tag in ((P.gensP, S.gensE, "E"), (P.gensPp, S.gensEp, "E'"),
                             (P.gensTMcapE, S.gensE, "E"), (P.gensTMcapEp, S.gensEp, "E'")):
        rep = _require_span("membership", lst, target, tag)
        if not rep.passed:
            raise StructureError(f"a generator is not a section of {tag}", rep.witness)
    for lst, tag in ((P.gensTMcapE, "TM^E"), (P.gensTMcapEp, "TM^E'")):
        for i, s in enumerate(lst):
            if not s.form.is_zero():
                raise StructureError(f"{tag} generator {i} has a form part", {"generator": i})
    return P


def _bracket_closure(label, left, right, target):
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            br = courant_bracket(a, b)
            mem = in_span(br, target)
            if mem.status == NO:
                return fail(label, generators=(i, j), bracket=br)
            if mem.status == INDET:
                raise IndeterminateExpansion(f"{label}: bracket ({i}, {j}) needs denominators", mem.locus)
    return ok(label)


def check_polarization(S: BigIsoStructure, P: PolarizationSpec) -> CheckReport:
    validate_polarization(S, P)
    parts = [
        _require_span("P-in-Pp", P.gensP, P.gensPp, "P'"),
        _require_span("TMcapE-in-P", P.gensTMcapE, P.gensP, "P"),
        _require_span("TMcapEp-in-Pp", P.gensTMcapEp, P.gensPp, "P'"),
        _bracket_closure("P-closed", P.gensP, P.gensP, P.gensP),
        _bracket_closure("PPp-closed", P.gensP, P.gensPp, P.gensPp),
    ]
    bad = None
    for i, y in enumerate(P.gensP):
        for a, z in enumerate(P.gensPp):
            val = pairing_omega(y, z)
            if not val.is_zero() and bad is None:
                bad = fail("omega-vanishes", generators=(i, a), value=val)
    parts.append(ok("omega-vanishes") if bad is None else bad)
    return combine("polarization", parts)


def section_residual(G: GPData, y: BigSection, s: LineSection) -> Scalar:
    """``nabla_Y s + c theta(y) s``, as a coefficient of the basis section."""
    phi = s.phi
    return y.vf(phi) + C * (pair(G.varpi, y.vf) + theta_eval(G, y)) * phi


def check_polarized_section(G: GPData, P: PolarizationSpec, s: LineSection, which: str = PP_FAMILY
                            ) -> CheckReport:
    name = f"polarized-section-{which}"
    for i, y in enumerate(P.family(which)):
        res = section_residual(G, y, s)
        if not res.is_zero():
            return fail(name, generator=i, residual=res)
    return ok(name)


def check_polarized_function(S: BigIsoStructure, P: PolarizationSpec, hp: HamiltonianPair) -> CheckReport:
    name = f"polarized-{hp.mode}"
    sec = hp.section
    if hp.mode == HAM:
        pairs = [((sec, z), a) for a, z in enumerate(P.gensPp)]
    else:
        pairs = [((y, sec), a) for a, y in enumerate(P.gensP)]
    for (x, y), a in pairs:
        br = courant_bracket(x, y)
        mem = in_span(br, P.gensPp)
        if mem.status == NO:
            return fail(name, generator=a, bracket=br)
        if mem.status == INDET:
            raise IndeterminateExpansion(f"{name}: bracket with generator {a} needs denominators", mem.locus)
    return ok(name)


def check_operator_restriction(G: GPData, S: BigIsoStructure, P: PolarizationSpec,
                               hp: HamiltonianPair, s: LineSection) -> CheckReport:
    """The quantum operator of a polarized function preserves the polarized sections.

    Ham functions map Gamma_P' K into itself, weak ones into Gamma_P K.  The
    result must not depend on the field: shifts by the supplied TM^E (resp.
    TM^E') generators leave the image unchanged.
    """
    name = "restriction"
    pre = [check_polarized_function(S, P, hp), check_polarized_section(G, P, s, PP_FAMILY)]
    for rep in pre:
        if not rep.passed:
            return CheckReport(name, rep.status, dict(rep.witness or {}, precondition=rep.check))
    image = quantum_operator(G, hp, s)
    target = PP_FAMILY if hp.mode == HAM else P_FAMILY
    post = check_polarized_section(G, P, image, target)
    if not post.passed:
        return CheckReport(name, post.status, dict(post.witness or {}, image=image.phi))
    shifts = P.gensTMcapE if hp.mode == HAM else P.gensTMcapEp
    for k, Z in enumerate(shifts):
        alt = HamiltonianPair(hp.f, hp.Xf + Z.vf, hp.mode, hp.structure)
        other = quantum_operator(G, alt, s)
        if other.phi != image.phi:
            return fail(name, shift=k, difference=other.phi - image.phi)
    return ok(name, image=image.phi)


def check_section_inclusion(G: GPData, P: PolarizationSpec, sections: Sequence[LineSection]) -> CheckReport:
    """Every supplied section polarized for P' is polarized for P."""
    name = "section-inclusion"
    for n, s in enumerate(sections):
        if check_polarized_section(G, P, s, PP_FAMILY).passed:
            rep = check_polarized_section(G, P, s, P_FAMILY)
            if not rep.passed:
                return fail(name, section=n, residual=rep.witness["residual"])
    return ok(name, sections=len(sections))


def check_omega_necessity(G: GPData, S: BigIsoStructure, P: PolarizationSpec,
                          candidates: Sequence[LineSection]) -> CheckReport:
    """Consistency of a nonzero polarized section with ``omega`` on ``P x P'``.

    Under the g.p. condition the curvature identity applied to a section
    polarized for both families gives ``c * omega(y, z) * phi = 0``; a
    candidate violating this would be a contradiction.  The details count
    the nonzero polarized candidates, which is the only emptiness evidence.
    """
    name = "omega-necessity"
    found = 0
    for n, s in enumerate(candidates):
        if s.phi.is_zero():
            continue
        if not (check_polarized_section(G, P, s, PP_FAMILY).passed
                and check_polarized_section(G, P, s, P_FAMILY).passed):
            continue
        found += 1
        for i, y in enumerate(P.gensP):
            for a, z in enumerate(P.gensPp):
                val = pairing_omega(y, z) * s.phi
                if not val.is_zero():
                    return fail(name, section=n, generators=(i, a), value=val)
    return ok(name, nonzero_polarized=found)


# --- leaves of the characteristic foliation -------------------------------------------------
def _leaf_point(leaf: Optional[Dict[str, object]]) -> Dict[str, Scalar]:
    return {k: as_scalar(v) for k, v in (leaf or {}).items()}


def _check_tangent(S: BigIsoStructure, leaf, sections):
    for n, s in enumerate(sections):
        for coord in leaf:
            if not s.vf.component(coord).subs(leaf).is_zero():
                raise NotOnLeaf(f"section {n} is not tangent to the leaf in {coord}")


def leaf_bracket(S: BigIsoStructure, a: BigSection, b: BigSection, leaf) -> BigSection:
    """``[a~, b~]_C`` restricted to the coordinate leaf ``{x_u = leaf[u]}``."""
    pt = _leaf_point(leaf)
    _check_tangent(S, pt, S.gensE)
    for label, sec, gens in (("a", a, S.gensE), ("b", b, S.gensEp)):
        mem = in_span(sec, gens)
        if mem.status == NO:
            raise NotInBundle(f"{label} is not a section of the structure", {"section": label})
    return courant_bracket(a, b).subs(pt)


def check_leaf_extension_independence(S: BigIsoStructure, a: BigSection, b: BigSection, leaf,
                                      vanishing: Sequence[Scalar]) -> CheckReport:
    """Changing b by ``sum lam_i * f_i`` with ``lam_i = 0`` on the leaf does not move the bracket."""
    name = "leaf-extension"
    pt = _leaf_point(leaf)
    base = leaf_bracket(S, a, b, leaf)
    shift = BigSection.zero(S.chart)
    for lam, f in zip(vanishing, S.gensEp):
        lam = as_scalar(lam)
        if not lam.subs(pt).is_zero():
            raise ValueError("the extension coefficients must vanish on the leaf")
        shift = shift + f * lam
    other = leaf_bracket(S, a, b + shift, leaf)
    if other != base:
        return fail(name, difference=other - base)
    return ok(name)


def check_pointwise_polarization(S: BigIsoStructure, P: PolarizationSpec, leaf) -> CheckReport:
    """Regular point-wise version: closure is tested with leaf brackets on one leaf."""
    pt = _leaf_point(leaf)
    restrict = [[s.subs(pt) for s in lst] for lst in (P.gensP, P.gensPp)]
    parts = [
        _require_span("P-in-Pp", P.gensP, P.gensPp, "P'"),
        _require_span("TMcapE-in-P", P.gensTMcapE, P.gensP, "P"),
        _require_span("TMcapEp-in-Pp", P.gensTMcapEp, P.gensPp, "P'"),
    ]
    for label, left, right, target in (("P-closed", P.gensP, P.gensP, restrict[0]),
                                       ("PPp-closed", P.gensP, P.gensPp, restrict[1])):
        rep = ok(label)
        for i, x in enumerate(left):
            for j, y in enumerate(right):
                br = leaf_bracket(S, x, y, leaf)
                if in_span(br, target).status != "yes":
                    rep = fail(label, generators=(i, j), bracket=br)
                    break
            if not rep.passed:
                break
        parts.append(rep)
    bad = None
    for i, y in enumerate(P.gensP):
        for a, z in enumerate(P.gensPp):
            if not pairing_omega(y, z).is_zero():
                if bad is None:
                    bad = fail("omega-vanishes", generators=(i, a))
    parts.append(ok("omega-vanishes") if bad is None else bad)
    return combine("pointwise-polarization", parts)
