"""Big-isotropic structures given by explicit generator frames of E and E'."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence

from .big_tangent import BigSection, StableSection, courant_bracket, pairing_g
from .calculus import (
    Chart,
    KForm,
    KMultivector,
    VectorField,
    differential,
    flat,
    lie_derivative_form,
    pair,
    poisson_check,
    sharp,
)
from .errors import (
    AnnihilatorMismatch,
    IsotropyViolation,
    NotPoisson,
    OrthogonalityViolation,
    RankDeficiency,
)
from .linalg import rank, solve
from .report import CheckReport, fail, indeterminate, ok
from .scalar import ZERO, Scalar, as_scalar

Point = Dict[str, Fraction]

YES, NO, INDET = "yes", "no", "indeterminate"


def components(obj) -> List[Scalar]:
    """Flat coordinate vector of a section, vector field or 1-form."""
    if isinstance(obj, (BigSection, StableSection)):
        return obj.components()
    if isinstance(obj, VectorField):
        return obj.components()
    if isinstance(obj, KForm) and obj.degree == 1:
        return [obj.component(n) for n in obj.chart.coords]
    raise TypeError(f"no flat components for {type(obj).__name__}")


@dataclass
class Membership:
    status: str
    coeffs: Optional[List[Scalar]] = None
    locus: Optional[Scalar] = None

    def __bool__(self):
        return self.status == YES


def in_span(s, gens: Sequence) -> Membership:
    """Decide ``s in span(gens)`` with polynomial coefficients, generically."""
    target = components(s)
    if not gens:
        return Membership(YES if all(v.is_zero() for v in target) else NO, [])
    cols = [components(g) for g in gens]
    sol = solve(cols, target)
    if not sol.consistent:
        return Membership(NO)
    coeffs = sol.polynomial()
    if coeffs is None:
        return Membership(INDET, locus=sol.locus())
    # exact reconstruction before answering yes
    recon = [ZERO] * len(target)
    for a, col in zip(coeffs, cols):
        recon = [r + a * e for r, e in zip(recon, col)]
    if recon != target:  # pragma: no cover - guarded by construction
        raise ArithmeticError("span reconstruction mismatch")
    return Membership(YES, coeffs)


def member_at_point(s, gens: Sequence, point: Point) -> bool:
    """Point-wise oracle: is s(x) in the span of the g(x)?"""
    target = [v.subs(point) for v in components(s)]
    cols = [[v.subs(point) for v in components(g)] for g in gens]
    if not cols:
        return all(v.is_zero() for v in target)
    rows = [[c[i] for c in cols] for i in range(len(target))]
    with_t = [r + [t] for r, t in zip(rows, target)]
    return rank(rows) == rank(with_t)


def rank_at(gens: Sequence, point: Point) -> int:
    if not gens:
        return 0
    cols = [[v.subs(point) for v in components(g)] for g in gens]
    return rank([[c[i] for c in cols] for i in range(len(cols[0]))])


def sample_points(chart: Chart, n: int = 3, seed: int = 0) -> List[Point]:
    rng = random.Random(seed)
    return [{name: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for name in chart.coords}
            for _ in range(n)]


@dataclass
class BigIsoStructure:
    chart: Chart
    gensE: List[BigSection]
    gensEp: List[BigSection]
    sample_points: List[Point] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.gensE)

    @property
    def m(self) -> int:
        return self.chart.dim

    def is_dirac(self) -> bool:
        return self.k == self.m


def validate_structure(gensE: Sequence[BigSection], gensEp: Sequence[BigSection],
                       sample_pts: Optional[Sequence[Point]] = None,
                       chart: Optional[Chart] = None) -> BigIsoStructure:
    gensE, gensEp = list(gensE), list(gensEp)
    if chart is None:
        if not (gensE or gensEp):
            raise ValueError("cannot infer the chart of an empty structure")
        chart = (gensE or gensEp)[0].chart
    m, k = chart.dim, len(gensE)
    if len(gensEp) != 2 * m - k:
        raise RankDeficiency(f"E' needs {2 * m - k} generators, got {len(gensEp)}")
    pts = list(sample_pts) if sample_pts is not None else sample_points(chart)
    for i in range(k):
        for j in range(i, k):
            val = pairing_g(gensE[i], gensE[j])
            if not val.is_zero():
                raise IsotropyViolation(f"g(e{i}, e{j}) = {val}", {"pair": (i, j), "value": val})
    for i, e in enumerate(gensE):
        for a, f in enumerate(gensEp):
            val = pairing_g(e, f)
            if not val.is_zero():
                raise OrthogonalityViolation(f"g(e{i}, f{a}) = {val}", {"pair": (i, a), "value": val})
    notes = []
    for i, e in enumerate(gensE):
        mem = in_span(e, gensEp)
        if mem.status == NO:
            raise OrthogonalityViolation(f"e{i} is not in E'", {"generator": i})
        if mem.status == INDET:
            notes.append(f"e{i} in E' only away from {mem.locus} = 0")
    for pt in pts:
        if rank_at(gensE, pt) != k:
            raise RankDeficiency(f"E has rank < {k} at {pt}", {"point": pt, "frame": "E"})
        if rank_at(gensEp, pt) != 2 * m - k:
            raise RankDeficiency(f"E' has rank < {2 * m - k} at {pt}", {"point": pt, "frame": "E'"})
    return BigIsoStructure(chart, gensE, gensEp, pts, notes)


def check_integrable(S: BigIsoStructure) -> CheckReport:
    name = "integrable"
    E, Ep = S.gensE, S.gensEp
    for i in range(S.k):
        for j in range(i + 1, S.k):
            br = courant_bracket(E[i], E[j])
            for a, f in enumerate(Ep):
                val = pairing_g(br, f)
                if not val.is_zero():
                    return fail(name, generators=(f"e{i}", f"e{j}", f"f{a}"), bracket=br, residual=val)
    for i in range(S.k):
        for a, f in enumerate(Ep):
            br = courant_bracket(E[i], f)
            for j, e in enumerate(E):
                val = pairing_g(br, e)
                if not val.is_zero():
                    return fail(name, generators=(f"e{i}", f"f{a}", f"e{j}"), bracket=br, residual=val)
    return ok(name)


def _coordinate_frame(chart: Chart):
    return ([VectorField.coordinate(chart, n) for n in chart.coords],
            [KForm.coordinate(chart, n) for n in chart.coords])


def _complementary(chart, a, b, pts, what):
    m = chart.dim
    for pt in pts:
        if rank_at(a, pt) + rank_at(b, pt) != m:
            raise AnnihilatorMismatch(f"{what}: ranks are not complementary at {pt}", {"point": pt})


def build_graph_two_form(lam: KForm, gensS: Sequence[VectorField], gensAnnS: Sequence[KForm],
                         sample_pts: Optional[Sequence[Point]] = None) -> BigIsoStructure:
    chart = lam.chart
    pts = list(sample_pts) if sample_pts is not None else sample_points(chart)
    for a, gam in enumerate(gensAnnS):
        for i, X in enumerate(gensS):
            val = pair(gam, X)
            if not val.is_zero():
                raise AnnihilatorMismatch(f"gamma{a}(X{i}) = {val}", {"pair": (a, i), "value": val})
    _complementary(chart, list(gensS), list(gensAnnS), pts, "S / ann S")
    dX, _ = _coordinate_frame(chart)
    gensE = [BigSection(X, flat(lam, X)) for X in gensS]
    gensEp = [BigSection(X, flat(lam, X)) for X in dX]
    gensEp += [BigSection(VectorField.zero(chart), g) for g in gensAnnS]
    return validate_structure(gensE, gensEp, pts, chart)


def build_graph_bivector(P: KMultivector, gensSigma: Sequence[KForm], gensAnnSigma: Sequence[VectorField],
                         sample_pts: Optional[Sequence[Point]] = None) -> BigIsoStructure:
    chart = P.chart
    pts = list(sample_pts) if sample_pts is not None else sample_points(chart)
    for a, sig in enumerate(gensSigma):
        for i, Z in enumerate(gensAnnSigma):
            val = pair(sig, Z)
            if not val.is_zero():
                raise AnnihilatorMismatch(f"sigma{a}(Z{i}) = {val}", {"pair": (a, i), "value": val})
    _complementary(chart, list(gensSigma), list(gensAnnSigma), pts, "Sigma / ann Sigma")
    _, dx = _coordinate_frame(chart)
    gensE = [BigSection(sharp(P, s), s) for s in gensSigma]
    gensEp = [BigSection(sharp(P, s), s) for s in dx]
    gensEp += [BigSection(Z, KForm.zero(chart, 1)) for Z in gensAnnSigma]
    return validate_structure(gensE, gensEp, pts, chart)


def bracket_one_forms(P: KMultivector, alpha: KForm, beta: KForm) -> KForm:
    return (lie_derivative_form(sharp(P, alpha), beta) - lie_derivative_form(sharp(P, beta), alpha)
            - differential(P.chart, P(alpha, beta)))


def check_sigma_closed(P: KMultivector, gensSigma: Sequence[KForm]) -> CheckReport:
    if not poisson_check(P):
        raise NotPoisson("bivector is not Poisson")
    name = "sigma-closed"
    gens = list(gensSigma)
    for i, j in combinations_with_replacement(range(len(gens)), 2):
        br = bracket_one_forms(P, gens[i], gens[j])
        mem = in_span(br, gens)
        if mem.status == NO:
            return fail(name, generators=(i, j), bracket=br)
        if mem.status == INDET:
            return indeterminate(name, mem.locus, generators=(i, j), bracket=br)
    return ok(name)


# --- the constrained mechanical system --------------------------------------------------------
def mechanics_chart(n: int) -> Chart:
    return Chart(tuple(f"q{i}" for i in range(1, n + 1)) + tuple(f"p{i}" for i in range(1, n + 1)))


def canonical_bivector(chart: Chart, n: int) -> KMultivector:
    return KMultivector(chart, 2, {(f"q{i}", f"p{i}"): 1 for i in range(1, n + 1)})


def constrained_mechanics(n: int, constraints: Sequence[Sequence], sample_pts=None):
    """Structure for ``P = D[q_i]^D[p_i]`` and ``Sigma = ann sharp_P(pi^* ann L)``.

    ``constraints`` lists the rows ``phi^a_i`` of the equations
    ``phi^a_i dq^i = 0`` of the distribution L (functions of the q's).
    Returns ``(structure, P, gensSigma, gensAnnSigma)``.
    """
    from .linalg import kernel

    chart = mechanics_chart(n)
    P = canonical_bivector(chart, n)
    rows = [[as_scalar(v) for v in row] for row in constraints]
    # sharp_P(dq^i) = D[p_i], so sharp_P(pi^* ann L) is spanned by Z_a = phi^a_i D[p_i]
    ann_sigma = [VectorField(chart, {f"p{i + 1}": row[i] for i in range(n)}) for row in rows]
    sigma = [KForm.coordinate(chart, f"q{i}") for i in range(1, n + 1)]
    if rows:
        cols = [[row[i] for row in rows] for i in range(n)]
        for vec in kernel(cols):
            sigma.append(KForm(chart, 1, {(f"p{i + 1}",): vec[i] for i in range(n)}))
    else:
        sigma += [KForm.coordinate(chart, f"p{i}") for i in range(1, n + 1)]
    S = build_graph_bivector(P, sigma, ann_sigma, sample_pts)
    return S, P, sigma, ann_sigma
