"""Hamiltonian and weak-Hamiltonian functions of a big-isotropic structure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .big_tangent import BigSection, pairing_g
from .calculus import VectorField, differential, lie_bracket
from .errors import Indeterminate, NotInBundle, Unsolvable
from .linalg import solve
from .report import CheckReport, fail, ok
from .scalar import Scalar, as_scalar
from .structures import BigIsoStructure

HAM, WHAM = "Ham", "wHam"


@dataclass(frozen=True)
class HamiltonianPair:
    """A function with a certified (weak-)Hamiltonian vector field."""

    f: Scalar
    Xf: VectorField
    mode: str
    structure: BigIsoStructure

    @property
    def section(self) -> BigSection:
        return BigSection(self.Xf, differential(self.Xf.chart, self.f))

    def shifted(self, Z: VectorField) -> "HamiltonianPair":
        """Same function with ``X_f + Z``; re-certified."""
        return verify_hamiltonian(self.f, self.Xf + Z, self.structure, self.mode)


def _frame(S: BigIsoStructure, mode: str):
    if mode == HAM:
        return S.gensEp, "f"
    if mode == WHAM:
        return S.gensE, "e"
    raise ValueError(f"unknown mode {mode!r}")


def verify_hamiltonian(f, Xf: VectorField, S: BigIsoStructure, mode: str = HAM) -> HamiltonianPair:
    f = as_scalar(f)
    sec = BigSection(Xf, differential(S.chart, f))
    others, tag = _frame(S, mode)
    for a, g in enumerate(others):
        val = pairing_g(sec, g)
        if not val.is_zero():
            raise NotInBundle(f"({Xf}, d({f})) is not orthogonal to {tag}{a}",
                              {"generator": f"{tag}{a}", "value": val})
    return HamiltonianPair(f, Xf, mode, S)


def _reduce(vf: VectorField, D: Scalar) -> VectorField:
    comps = {}
    for n, v in vf.comps.items():
        q = v.divide_exact(D)
        if q is None:
            return vf
        comps[n] = q
    return VectorField(vf.chart, comps)


def hamiltonian_representative(f, S: BigIsoStructure, mode: str = HAM
                               ) -> Tuple[VectorField, List[VectorField]]:
    """One field X with (X, df) in E (resp. E') and the pure-vector ambiguity."""
    f = as_scalar(f)
    chart = S.chart
    gens = S.gensE if mode == HAM else S.gensEp
    df = differential(chart, f)
    target = [df.component(n) for n in chart.coords]
    if not gens:
        if all(v.is_zero() for v in target):
            return VectorField.zero(chart), []
        raise Unsolvable(f"d({f}) is not attainable")
    cols = [[g.form.component(n) for n in chart.coords] for g in gens]
    sol = solve(cols, target)
    if not sol.consistent:
        raise Unsolvable(f"d({f}) is not in the form projection of the {mode} bundle")
    coeffs = sol.polynomial()
    if coeffs is None:
        raise Indeterminate(f"representative of {f} has denominators", sol.locus())
    X = VectorField.zero(chart)
    for a, g in zip(coeffs, gens):
        X = X + g.vf * a
    ambiguity = []
    for vec in sol.kernel:
        Z = VectorField.zero(chart)
        for a, g in zip(vec, gens):
            Z = Z + g.vf * a
        if not Z.is_zero():
            ambiguity.append(_reduce(Z, sol.denominator))
    return X, ambiguity


def representative_pair(f, S: BigIsoStructure, mode: str = HAM) -> HamiltonianPair:
    X, _ = hamiltonian_representative(f, S, mode)
    return verify_hamiltonian(f, X, S, mode)


def poisson_bracket(fp: HamiltonianPair, hp: HamiltonianPair) -> Scalar:
    return fp.Xf(hp.f)


def bracket_pair(fp: HamiltonianPair, hp: HamiltonianPair, certify: bool = True) -> HamiltonianPair:
    """``{f, h}`` with the field ``[X_f, X_h]``, of the same mode as ``hp``."""
    val = poisson_bracket(fp, hp)
    X = lie_bracket(fp.Xf, hp.Xf)
    if certify:
        return verify_hamiltonian(val, X, hp.structure, hp.mode)
    return HamiltonianPair(val, X, hp.mode, hp.structure)


def check_leibniz(lp: HamiltonianPair, fp: HamiltonianPair, hp: HamiltonianPair) -> CheckReport:
    name = "leibniz"
    fh = bracket_pair(fp, hp, certify=False)
    lf = bracket_pair(lp, fp, certify=False)
    lh = bracket_pair(lp, hp, certify=False)
    res = poisson_bracket(lp, fh) - poisson_bracket(lf, hp) - poisson_bracket(fp, lh)
    if res.is_zero():
        return ok(name)
    return fail(name, residual=res)


def ambiguity_invariance(fp: HamiltonianPair, hp: HamiltonianPair,
                         extra_f: Optional[List[VectorField]] = None) -> CheckReport:
    """{f, h} is unchanged when X_f moves inside its ambiguity."""
    name = "bracket-independence"
    base = poisson_bracket(fp, hp)
    if extra_f is None:
        _, extra_f = hamiltonian_representative(fp.f, fp.structure, fp.mode)
    for k, Z in enumerate(extra_f):
        alt = HamiltonianPair(fp.f, fp.Xf + Z, fp.mode, fp.structure)
        val = poisson_bracket(alt, hp)
        if val != base:
            return fail(name, shift=k, residual=val - base)
    return ok(name)
