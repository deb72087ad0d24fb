"""Prequantization data on the trivial line bundle and the quantum operators.

A section is ``phi * 1``; the connection is ``nabla 1 = c * varpi * 1`` with
``c`` the formal stand-in for ``2 pi i``.  A first-order operator is kept as
its symbol ``(X, s)`` acting by ``phi -> X(phi) + s * phi``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .big_tangent import BigSection, pairing_g, pairing_omega
from .calculus import KForm, VectorField, d, lie_bracket, lie_derivative_form, pair
from .errors import NotClosed
from .hamiltonian import HamiltonianPair, bracket_pair
from .report import CheckReport, fail, ok
from .scalar import C, Scalar, as_scalar
from .structures import BigIsoStructure
from .truncated import PairBacked, d_tr_eval


@dataclass(frozen=True)
class GPData:
    varpi: KForm
    U: VectorField
    nu: KForm

    def __post_init__(self):
        if self.varpi.degree != 1 or self.nu.degree != 1:
            raise ValueError("varpi and nu must be 1-forms")
        for coef in self.varpi.comps.values():
            if not coef.is_real():
                raise ValueError("the connection form must have i-free coefficients")

    @classmethod
    def of(cls, varpi: KForm, U: Optional[VectorField] = None, nu: Optional[KForm] = None):
        chart = varpi.chart
        return cls(varpi, U if U is not None else VectorField.zero(chart),
                   nu if nu is not None else KForm.zero(chart, 1))

    @property
    def chart(self):
        return self.varpi.chart

    @property
    def theta(self) -> PairBacked:
        return PairBacked(self.U, self.nu)


@dataclass(frozen=True)
class LineSection:
    phi: Scalar

    def __post_init__(self):
        object.__setattr__(self, "phi", as_scalar(self.phi))


Symbol = Tuple[VectorField, Scalar]


def theta_eval(G: GPData, y: BigSection) -> Scalar:
    return G.theta.evaluate([], y)


def operator_symbol(G: GPData, hp: HamiltonianPair) -> Symbol:
    X = hp.Xf
    return X, C * (pair(G.varpi, X) + theta_eval(G, hp.section) + hp.f)


def apply_symbol(sym: Symbol, s: LineSection) -> LineSection:
    X, a = sym
    return LineSection(X(s.phi) + a * s.phi)


def quantum_operator(G: GPData, hp: HamiltonianPair, s: LineSection) -> LineSection:
    return apply_symbol(operator_symbol(G, hp), s)


def symbol_commutator(A: Symbol, B: Symbol) -> Symbol:
    return lie_bracket(A[0], B[0]), A[0](B[1]) - B[0](A[1])


def gp_residual(G: GPData, S: BigIsoStructure, x: BigSection, y: BigSection) -> Scalar:
    """``d varpi(X, Y) - omega_E(x, y) + d_tr theta(x, y)``; zero iff the condition holds at (x, y)."""
    dv = d(G.varpi)(x.vf, y.vf)
    return dv - pairing_omega(x, y) + d_tr_eval(S, G.theta, [x], y)


def check_gp_condition(G: GPData, S: BigIsoStructure) -> CheckReport:
    name = "gp-condition"
    for i, x in enumerate(S.gensE):
        for a, y in enumerate(S.gensEp):
            res = gp_residual(G, S, x, y)
            if not res.is_zero():
                return fail(name, pair=(f"e{i}", f"f{a}"), residual=res)
    return ok(name, pairs=len(S.gensE) * len(S.gensEp))


def commutator_defect(G: GPData, fp: HamiltonianPair, hp: HamiltonianPair) -> Tuple[VectorField, Scalar]:
    """Vector and scalar parts of ``[f^, h^] - ({f,h})^`` with ``X_{f,h} = [X_f, X_h]``."""
    lhs = symbol_commutator(operator_symbol(G, fp), operator_symbol(G, hp))
    fh = bracket_pair(fp, hp, certify=False)
    rhs = operator_symbol(G, fh)
    return lhs[0] - rhs[0], lhs[1] - rhs[1]


def commutator_check(G: GPData, fp: HamiltonianPair, hp: HamiltonianPair) -> CheckReport:
    name = "commutator"
    dv, ds = commutator_defect(G, fp, hp)
    if dv.is_zero() and ds.is_zero():
        return ok(name)
    return fail(name, vector_defect=dv, defect=ds)


def _check_closed(Xi: KForm):
    if Xi.degree != 2:
        raise ValueError("Xi must be a 2-form")
    dXi = d(Xi)
    if not dXi.is_zero():
        raise NotClosed(f"d Xi = {dXi}")


def integrality_direct(U: VectorField, Xi: KForm, x: BigSection, y: BigSection) -> Scalar:
    """``beta(X) + (L_U beta)(X) - alpha([Y, U]) - Xi(X, Y)``."""
    X, al = x.vf, x.form
    Y, be = y.vf, y.form
    return pair(be, X) + pair(lie_derivative_form(U, be), X) - pair(al, lie_bracket(Y, U)) - Xi(X, Y)


def lie_of_section(U: VectorField, y: BigSection) -> BigSection:
    return BigSection(lie_bracket(U, y.vf), lie_derivative_form(U, y.form))


def integrality_lie(U: VectorField, Xi: KForm, x: BigSection, y: BigSection) -> Scalar:
    """``-omega(x, y) + 2 g(x, L_U y) - Xi(X, Y)``.

    The omega term enters with a minus sign; only then does the expression
    coincide with the direct form on g-orthogonal pairs.
    """
    return -pairing_omega(x, y) + pairing_g(x, lie_of_section(U, y)) * 2 - Xi(x.vf, y.vf)


def integrality_lie_plus(U: VectorField, Xi: KForm, x: BigSection, y: BigSection) -> Scalar:
    """The same identity written with ``+omega``; it differs from the direct form by ``2 beta(X)``."""
    return pairing_omega(x, y) + pairing_g(x, lie_of_section(U, y)) * 2 - Xi(x.vf, y.vf)


_VARIANTS = {"direct": integrality_direct, "lie": integrality_lie, "lie-plus": integrality_lie_plus}


def check_integrality(S: BigIsoStructure, U: VectorField, Xi: KForm, variant: str = "direct") -> CheckReport:
    _check_closed(Xi)
    fn = _VARIANTS[variant]
    name = f"integrality-{variant}"
    for i, x in enumerate(S.gensE):
        for a, y in enumerate(S.gensEp):
            res = fn(U, Xi, x, y)
            if not res.is_zero():
                return fail(name, pair=(f"e{i}", f"f{a}"), residual=res)
    return ok(name)


def integrality_variants_agree(S: BigIsoStructure, U: VectorField, Xi: KForm,
                               variants=("direct", "lie")) -> CheckReport:
    name = "integrality-agreement"
    f0, f1 = _VARIANTS[variants[0]], _VARIANTS[variants[1]]
    for i, x in enumerate(S.gensE):
        for a, y in enumerate(S.gensEp):
            diff = f0(U, Xi, x, y) - f1(U, Xi, x, y)
            if not diff.is_zero():
                return fail(name, pair=(f"e{i}", f"f{a}"), difference=diff)
    return ok(name)


def gauge_shift(G: GPData, nu_tilde: KForm) -> GPData:
    return GPData(G.varpi + G.nu - nu_tilde, G.U, nu_tilde)


def vectorial(G: GPData) -> GPData:
    """The equivalent data with ``nu = 0``."""
    return gauge_shift(G, KForm.zero(G.chart, 1))


def check_gauge_invariance(G: GPData, nu_tilde: KForm, pairs, sections) -> CheckReport:
    name = "gauge-invariance"
    H = gauge_shift(G, nu_tilde)
    for k, hp in enumerate(pairs):
        for n, s in enumerate(sections):
            a, b = quantum_operator(G, hp, s).phi, quantum_operator(H, hp, s).phi
            if a != b:
                return fail(name, pair=k, section=n, difference=a - b)
    return ok(name)


