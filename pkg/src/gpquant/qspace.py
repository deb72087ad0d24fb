"""The prequantization space ``Q = M x R_t`` and the lifted structures on it."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import List, Optional, Sequence

from .big_tangent import BigSection, StableSection, courant_bracket, pairing_g, pairing_omega, wade_bracket
from .calculus import (
    KForm,
    KMultivector,
    VectorField,
    d,
    differential,
    flat,
    lie_bracket,
    lie_derivative_form,
    pair,
    sharp,
)
from .hamiltonian import HamiltonianPair, bracket_pair
from .prequantization import GPData, theta_eval
from .report import FAIL, INDETERMINATE, PASS, CheckReport, fail, indeterminate, ok
from .scalar import as_scalar
from .structures import INDET, NO, BigIsoStructure, in_span, rank_at

FIBER = "t"


class QContext:
    def __init__(self, G: GPData):
        base = G.chart
        if FIBER in base.coords:
            raise ValueError("the base chart already uses the fibre coordinate")
        self.G = G
        self.base = base
        self.chart = base.extend(FIBER)
        self.V = VectorField.coordinate(self.chart, FIBER)
        self.varpi = G.varpi.on(self.chart)
        self.sigma = self.varpi + KForm.coordinate(self.chart, FIBER)

    # lifts ---------------------------------------------------------------------------------
    def lift_field(self, X: VectorField) -> VectorField:
        return X.on(self.chart)

    def lift_form(self, alpha: KForm) -> KForm:
        return alpha.on(self.chart)

    def horizontal(self, X: VectorField) -> VectorField:
        return X.on(self.chart) - self.V * pair(self.G.varpi, X)

    def horizontal_bivector(self, P: KMultivector) -> KMultivector:
        out = KMultivector.zero(self.chart, 2)
        frame = {n: self.horizontal(VectorField.coordinate(self.base, n)) for n in self.base.coords}
        for (a, b), coef in P.comps.items():
            out = out + frame[a].wedge(frame[b]) * coef
        return out

    def lift_section(self, x: BigSection) -> BigSection:
        """``(X^H - theta(x) V, p^* alpha)``."""
        th = theta_eval(self.G, x)
        return BigSection(self.horizontal(x.vf) - self.V * th, self.lift_form(x.form))

    @property
    def stable_V(self) -> StableSection:
        return StableSection(self.V, 0, KForm.zero(self.chart, 1), 1)

    @property
    def stable_one(self) -> StableSection:
        return StableSection(VectorField.zero(self.chart), 0, KForm.zero(self.chart, 1), 1)

    @property
    def stable_U(self) -> StableSection:
        return StableSection(self.horizontal(self.G.U), -1, self.sigma + self.lift_form(self.G.nu), 0)

    def points(self, base_points):
        return [dict(pt, **{FIBER: 0}) for pt in base_points]


def horizontal_lift(Q: QContext, X: VectorField) -> VectorField:
    return Q.horizontal(X)


def check_curvature_relation(Q: QContext) -> CheckReport:
    name = "curvature"
    dv = d(Q.G.varpi)
    fields = {n: VectorField.coordinate(Q.base, n) for n in Q.base.coords}
    for a, b in combinations(Q.base.coords, 2):
        lhs = dv(fields[a], fields[b])
        rhs = -pair(Q.sigma, lie_bracket(Q.horizontal(fields[a]), Q.horizontal(fields[b])))
        if lhs != rhs:
            return fail(name, pair=(a, b), residual=lhs - rhs)
    for a in Q.base.coords:
        br = lie_bracket(Q.horizontal(fields[a]), Q.V)
        if not br.is_zero():
            return fail(name, pair=(a, FIBER), bracket=br)
    return ok(name)


def xbar_field(Q: QContext, hp: HamiltonianPair) -> VectorField:
    th = theta_eval(Q.G, hp.section)
    return Q.horizontal(hp.Xf) - Q.V * (th + hp.f)


def check_comutant(Q: QContext, fp: HamiltonianPair, hp: HamiltonianPair) -> CheckReport:
    name = "comutant"
    lhs = lie_bracket(xbar_field(Q, fp), xbar_field(Q, hp))
    rhs = xbar_field(Q, bracket_pair(fp, hp, certify=False))
    if lhs == rhs:
        return ok(name)
    return fail(name, difference=lhs - rhs)


@dataclass
class LiftedFrames:
    mode: str
    gens: list
    orth: Optional[list] = None


def lift_structure(Q: QContext, S: BigIsoStructure, mode: str) -> LiftedFrames:
    lifts = [Q.lift_section(e) for e in S.gensE]
    V0 = BigSection(Q.V, KForm.zero(Q.chart, 1))
    if mode == "EH":
        return LiftedFrames(mode, lifts)
    if mode == "pullback":
        return LiftedFrames(mode, lifts + [V0])
    if mode == "prolong":
        return LiftedFrames(mode, [StableSection.embed(s) for s in lifts + [V0]] + [Q.stable_one])
    if mode == "stableEH":
        gens = [StableSection.embed(s) for s in lifts] + [Q.stable_V]
        orth = [StableSection.embed(Q.lift_section(f)) for f in S.gensEp]
        orth += [Q.stable_V, Q.stable_one, Q.stable_U]
        return LiftedFrames(mode, gens, orth)
    raise ValueError(f"unknown lift mode {mode!r}")


def _closure(name, gens, bracket) -> CheckReport:
    for i, j in combinations_with_replacement(range(len(gens)), 2):
        br = bracket(gens[i], gens[j])
        mem = in_span(br, gens)
        if mem.status == NO:
            return fail(name, generators=(i, j), bracket=br)
        if mem.status == INDET:
            return indeterminate(name, mem.locus, generators=(i, j), bracket=br)
    return ok(name)


def wade_closure(Q: QContext, S: BigIsoStructure) -> CheckReport:
    """Wade closure of the stable lift; failures carry omega_E of the base pair."""
    rep = _closure("wade-closure", lift_structure(Q, S, "stableEH").gens, wade_bracket)
    if rep.status != PASS:
        i, j = rep.witness["generators"]
        if i < S.k and j < S.k:
            rep.witness["omega_E"] = pairing_omega(S.gensE[i], S.gensE[j])
    return rep


def _parts_report(name: str, parts: List[CheckReport]) -> CheckReport:
    statuses = {p.check: p.status for p in parts}
    for status in (FAIL, INDETERMINATE):
        for p in parts:
            if p.status == status:
                w = dict(p.witness or {})
                w["part"] = p.check
                return CheckReport(name, status, w, {"parts": statuses})
    return CheckReport(name, PASS, None, {"parts": statuses})


def check_lift_properties(Q: QContext, S: BigIsoStructure, triples: Sequence = ()) -> CheckReport:
    st = lift_structure(Q, S, "stableEH")
    parts = []
    # (a) isotropy and rank
    bad = None
    for i, j in combinations_with_replacement(range(len(st.gens)), 2):
        val = pairing_g(st.gens[i], st.gens[j])
        if not val.is_zero():
            bad = fail("isotropy", generators=(i, j), value=val)
            break
    if bad is None:
        for pt in Q.points(S.sample_points):
            if rank_at(st.gens, pt) != S.k + 1:
                bad = fail("isotropy", point=pt, reason="rank")
                break
    parts.append(ok("isotropy") if bad is None else bad)
    # (b) orthogonality against the E'^H list
    bad = None
    for i, e in enumerate(st.gens):
        for a, f in enumerate(st.orth):
            val = pairing_g(e, f)
            if not val.is_zero():
                if bad is None:
                    bad = fail("orthogonality", generators=(i, a), value=val)
    parts.append(ok("orthogonality") if bad is None else bad)
    # (c) Wade closure, (d) pullback and prolongation closure
    parts.append(wade_closure(Q, S))
    parts.append(_closure("pullback-closure", lift_structure(Q, S, "pullback").gens, courant_bracket))
    parts.append(_closure("prolongation-closure", lift_structure(Q, S, "prolong").gens, wade_bracket))
    # (e) V is an infinitesimal automorphism
    bad = None
    for i, s in enumerate(lift_structure(Q, S, "EH").gens):
        if not lie_bracket(Q.V, s.vf).is_zero() or not lie_derivative_form(Q.V, s.form).is_zero():
            bad = fail("v-automorphism", generator=i)
            break
    parts.append(ok("v-automorphism") if bad is None else bad)
    # (f) the Jacobi-Dirac identities
    parts.append(check_jacobi_dirac(Q, triples))
    return _parts_report("lift", parts)


def check_jacobi_dirac(Q: QContext, triples: Sequence = ()) -> CheckReport:
    name = "jacobi-dirac"
    UV = wade_bracket(Q.stable_U, Q.stable_V)
    if not UV.is_zero():
        return fail(name, identity="[U,V]_W", bracket=UV)
    for n, (X, X1, X2) in enumerate(triples):
        val = pairing_g(wade_bracket(X, X1), X2) + pairing_g(X1, wade_bracket(X, X2))
        if not val.is_zero():
            return fail(name, identity="invariance", triple=n, residual=val)
    return ok(name, triples=len(triples))


# --- graph identifications --------------------------------------------------------------------
def span_equal(a: Sequence, b: Sequence) -> CheckReport:
    name = "span-equality"
    for label, xs, ys in (("left", a, b), ("right", b, a)):
        for i, s in enumerate(xs):
            mem = in_span(s, ys)
            if mem.status == NO:
                return fail(name, direction=label, generator=i, section=s)
            if mem.status == INDET:
                return indeterminate(name, mem.locus, direction=label, generator=i)
    return ok(name)


def pullback_graph_two_form(Q: QContext, lam: KForm, gensS: Sequence[VectorField]) -> List[BigSection]:
    """``graph(flat_{p^* lam})`` restricted to ``span{Z^H, V}``."""
    lamQ = lam.on(Q.chart)
    fields = [Q.horizontal(Z) for Z in gensS] + [Q.V]
    return [BigSection(W, flat(lamQ, W)) for W in fields]


def psi_graph(Q: QContext, P: KMultivector, gensSigma: Sequence[KForm]) -> List[StableSection]:
    """``graph(Psi)`` on ``p^* Sigma + span{(0, 1)}`` with ``Pi = P^H + V ^ U^H``."""
    Pi = Q.horizontal_bivector(P) + Q.V.wedge(Q.horizontal(Q.G.U))
    nuQ = Q.lift_form(Q.G.nu)
    PQ = P.on(Q.chart)

    def psi(kappa: KForm, v) -> StableSection:
        v = as_scalar(v)
        vf = sharp(Pi, kappa) + Q.V * (v + PQ(nuQ, kappa))
        return StableSection(vf, -pair(kappa, Q.V), kappa, v)

    out = [psi(s.on(Q.chart), 0) for s in gensSigma]
    out.append(psi(KForm.zero(Q.chart, 1), 1))
    return out


def hamiltonian_jet_check(Q: QContext, S: BigIsoStructure, point, hp_for) -> CheckReport:
    """Spot-check that a lifted frame value equals ``(Xbar_h, d h)`` for some h.

    ``hp_for(i)`` returns a certified weak-Hamiltonian pair whose value at
    ``point`` agrees with generator ``e_i`` and whose function vanishes there.
    """
    name = "jet"
    ptQ = dict(point, **{FIBER: 0})
    for i, e in enumerate(S.gensE):
        hp = hp_for(i)
        lift = Q.lift_section(e).subs(ptQ)
        val = BigSection(xbar_field(Q, hp), Q.lift_form(differential(Q.base, hp.f))).subs(ptQ)
        if lift != val:
            return fail(name, generator=i, lift=lift, value=val)
    return ok(name)
