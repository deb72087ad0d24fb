"""Truncated forms of a coordinate foliation and the bigraded differential.

The foliation F is spanned by the leaf coordinate fields ``D[x_i]``; the
complement Q by ``Q_a = D[x_a] + sum_i A_a^i D[x_i]`` over the transverse
coordinates.  The dual coframe is

    eta^a = dx^a                        (type (1, 0))
    theta^i = dx^i - sum_a A_a^i dx^a   (type (0, 1))

and forms are stored against it as KForms on the ``frame chart`` whose
names are the transverse coordinates followed by the leaf ones.  A name
then stands for ``eta`` or ``theta`` instead of a coordinate differential.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .calculus import Chart, KForm, VectorField, d
from .errors import NotClosed
from .report import CheckReport, combine, fail, ok
from .scalar import Scalar, as_scalar

DPRIME, DDOUBLE, PARTIAL = "dprime", "ddouble", "partial"
_SHIFT = {DPRIME: (1, 0), DDOUBLE: (0, 1), PARTIAL: (2, -1)}

Bidegree = Tuple[int, int]


class FoliationChart:
    def __init__(self, chart: Chart, leaf: Sequence[str], A: Optional[Mapping[Tuple[str, str], object]] = None):
        leaf = tuple(leaf)
        for n in leaf:
            chart.index(n)
        self.chart = chart
        self.leaf = leaf
        self.transverse = tuple(n for n in chart.coords if n not in leaf)
        self.A: Dict[Tuple[str, str], Scalar] = {}
        for (a, i), v in dict(A or {}).items():
            if a not in self.transverse or i not in leaf:
                raise ValueError(f"A[{a}, {i}] must pair a transverse with a leaf coordinate")
            v = as_scalar(v)
            if not v.is_zero():
                self.A[(a, i)] = v
        self.frame_chart = Chart(self.transverse + leaf)
        self._to_frame = {}
        self._to_coords = {}
        for n in chart.coords:
            img = KForm.coordinate(self.frame_chart, n)
            back = KForm.coordinate(chart, n)
            if n in leaf:
                for a in self.transverse:
                    coef = self.A.get((a, n))
                    if coef is not None:
                        img = img + KForm.coordinate(self.frame_chart, a) * coef
                        back = back - KForm.coordinate(chart, a) * coef
            self._to_frame[n] = img
            self._to_coords[n] = back

    @classmethod
    def from_qframe(cls, chart: Chart, dimF: int, qframe: Sequence[VectorField]) -> "FoliationChart":
        """Leaf coordinates are those not led by a Q-frame field ``D[x_a] + (leaf terms)``."""
        heads = []
        for Z in qframe:
            lead = [n for n in chart.coords if Z.component(n) == 1 and n not in heads]
            if not lead:
                raise ValueError(f"{Z} has no unit coordinate component")
            heads.append(lead[0])
        leaf = [n for n in chart.coords if n not in heads]
        if len(leaf) != dimF:
            raise ValueError(f"the Q-frame leaves {len(leaf)} leaf coordinates, expected {dimF}")
        A = {}
        for a, Z in zip(heads, qframe):
            for n, v in Z.comps.items():
                if n == a:
                    continue
                if n not in leaf:
                    raise ValueError(f"Q-frame field for {a} has a transverse component along {n}")
                A[(a, n)] = v
        return cls(chart, leaf, A)

    @property
    def dimF(self) -> int:
        return len(self.leaf)

    def Q(self, a: str) -> VectorField:
        comps = {a: 1}
        for (b, i), v in self.A.items():
            if b == a:
                comps[i] = v
        return VectorField(self.chart, comps)

    def qframe(self):
        return [self.Q(a) for a in self.transverse]

    def type_of(self, key: Iterable[str]) -> Bidegree:
        key = tuple(key)
        p = sum(1 for n in key if n not in self.leaf)
        return p, len(key) - p

    def _convert(self, w: KForm, images, target: Chart) -> KForm:
        out = KForm.zero(target, w.degree)
        for key, coef in w.comps.items():
            term = KForm.scalar(target, coef)
            for n in key:
                term = term ^ images[n]
            out = out + term
        return out

    def to_frame(self, w: KForm) -> KForm:
        return self._convert(w, self._to_frame, self.frame_chart)

    def to_coords(self, w: KForm) -> KForm:
        return self._convert(w, self._to_coords, self.chart)


class BigradedForm:
    """A k-form written in the Q/F coframe, split by type ``(p, q)``."""

    __slots__ = ("fol", "frame")

    def __init__(self, fol: FoliationChart, frame: KForm):
        if frame.chart != fol.frame_chart:
            raise ValueError("frame components must live on the frame chart")
        self.fol = fol
        self.frame = frame

    @property
    def degree(self) -> int:
        return self.frame.degree

    @classmethod
    def zero(cls, fol: FoliationChart, degree: int) -> "BigradedForm":
        return cls(fol, KForm.zero(fol.frame_chart, degree))

    def components(self) -> Dict[Bidegree, "BigradedForm"]:
        parts: Dict[Bidegree, dict] = {}
        for key, v in self.frame.comps.items():
            parts.setdefault(self.fol.type_of(key), {})[key] = v
        return {t: BigradedForm(self.fol, KForm(self.fol.frame_chart, self.degree, c)) for t, c in parts.items()}

    def component(self, p: int, q: int) -> "BigradedForm":
        if p + q != self.degree:
            raise ValueError(f"type ({p}, {q}) does not have degree {self.degree}")
        if p < 0 or q < 0:
            return BigradedForm.zero(self.fol, self.degree)
        return self.components().get((p, q), BigradedForm.zero(self.fol, self.degree))

    def types(self):
        return sorted(self.components())

    def is_zero(self) -> bool:
        return self.frame.is_zero()

    def to_kform(self) -> KForm:
        return self.fol.to_coords(self.frame)

    def project(self, pmax: int) -> "BigradedForm":
        keep = {k: v for k, v in self.frame.comps.items() if self.fol.type_of(k)[0] <= pmax}
        return BigradedForm(self.fol, KForm(self.fol.frame_chart, self.degree, keep))

    def _check(self, other):
        if not isinstance(other, BigradedForm) or other.fol is not self.fol:
            raise ValueError("bigraded forms of different foliations")

    def __add__(self, other):
        self._check(other)
        return BigradedForm(self.fol, self.frame + other.frame)

    def __sub__(self, other):
        self._check(other)
        return BigradedForm(self.fol, self.frame - other.frame)

    def __neg__(self):
        return BigradedForm(self.fol, -self.frame)

    def __mul__(self, f):
        return BigradedForm(self.fol, self.frame * f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BigradedForm):
            return NotImplemented
        return self.fol is other.fol and self.frame == other.frame

    def __hash__(self):
        return hash(self.frame)

    def __str__(self):
        return " + ".join(f"{t}: {c.frame}" for t, c in sorted(self.components().items())) or "0"

    __repr__ = __str__


def decompose(fol: FoliationChart, w: KForm) -> BigradedForm:
    return BigradedForm(fol, fol.to_frame(w))


def full_differential(w: BigradedForm) -> BigradedForm:
    return decompose(w.fol, d(w.to_kform()))


def graded_differential(w: BigradedForm, which: str) -> BigradedForm:
    dp, dq = _SHIFT[which]
    fol = w.fol
    out = BigradedForm.zero(fol, w.degree + 1)
    for (p, q), comp in w.components().items():
        out = out + full_differential(comp).component(p + dp, q + dq)
    return out


def d_prime(w: BigradedForm) -> BigradedForm:
    return graded_differential(w, DPRIME)


def d_double(w: BigradedForm) -> BigradedForm:
    return graded_differential(w, DDOUBLE)


def d_partial(w: BigradedForm) -> BigradedForm:
    return graded_differential(w, PARTIAL)


def check_relations(samples: Sequence[BigradedForm]) -> CheckReport:
    """``d = d' + d'' + partial`` and the five quadratic relations, on every sample."""
    identities = {
        "decomposition": lambda w: full_differential(w) - d_prime(w) - d_double(w) - d_partial(w),
        "d''^2": lambda w: d_double(d_double(w)),
        "d'd''+d''d'": lambda w: d_prime(d_double(w)) + d_double(d_prime(w)),
        "partial^2": lambda w: d_partial(d_partial(w)),
        "d'partial+partial d'": lambda w: d_prime(d_partial(w)) + d_partial(d_prime(w)),
        "d'^2+d''partial+partial d''": lambda w: (d_prime(d_prime(w)) + d_double(d_partial(w))
                                                 + d_partial(d_double(w))),
    }
    parts = []
    for label, fn in identities.items():
        rep = ok(label, samples=len(samples))
        for n, w in enumerate(samples):
            res = fn(w)
            if not res.is_zero():
                rep = fail(label, sample=n, residual=res)
                break
        parts.append(rep)
    return combine("relations", parts)


# --- s-truncated forms ------------------------------------------------------------------------
class STruncForm:
    """``lam_(0,k) + ... + lam_(s,k-s)``."""

    __slots__ = ("s", "form")

    def __init__(self, s: int, form: BigradedForm):
        if s < 0:
            raise ValueError("s must be non-negative")
        for p, _ in form.types():
            if p > s:
                raise ValueError(f"component of type p = {p} exceeds s = {s}")
        self.s = s
        self.form = form

    @classmethod
    def truncate(cls, s: int, form: BigradedForm) -> "STruncForm":
        return cls(s, form.project(s))

    @property
    def k(self) -> int:
        return self.form.degree

    @property
    def fol(self) -> FoliationChart:
        return self.form.fol

    def component(self, p: int) -> BigradedForm:
        if p < 0 or p > self.s or p > self.k:
            return BigradedForm.zero(self.fol, self.k)
        return self.form.component(p, self.k - p)

    def is_zero(self) -> bool:
        return self.form.is_zero()

    def __eq__(self, other):
        if not isinstance(other, STruncForm):
            return NotImplemented
        return self.s == other.s and self.form == other.form

    def __hash__(self):
        return hash((self.s, self.form))

    def __add__(self, other):
        return STruncForm(self.s, self.form + other.form)

    def __sub__(self, other):
        return STruncForm(self.s, self.form - other.form)

    def __str__(self):
        return f"[s={self.s}] {self.form}"

    __repr__ = __str__


def d_s(lam: STruncForm) -> STruncForm:
    return STruncForm(lam.s, full_differential(lam.form).project(lam.s))


def d_s_displayed(lam: STruncForm) -> STruncForm:
    """``d lam - d' lam_s - partial lam_s - partial lam_(s-1)``, term by term."""
    s = lam.s
    top, below = lam.component(s), lam.component(s - 1)
    out = full_differential(lam.form) - d_prime(top) - d_partial(top) - d_partial(below)
    return STruncForm(s, out)


def check_ds_formula(samples: Sequence[STruncForm]) -> CheckReport:
    """The displayed overflow subtraction against the bidegree projection."""
    name = "ds-edge-bidegrees"
    for n, lam in enumerate(samples):
        try:
            shown = d_s_displayed(lam)
        except ValueError as exc:
            return fail(name, sample=n, reason=str(exc))
        if shown != d_s(lam):
            return fail(name, sample=n, difference=shown.form - d_s(lam).form)
    return ok(name, samples=len(samples))


def check_ds_squared(samples: Sequence[STruncForm]) -> CheckReport:
    name = "ds-squared"
    for n, lam in enumerate(samples):
        res = d_s(d_s(lam))
        if not res.is_zero():
            return fail(name, sample=n, residual=res.form)
    return ok(name, samples=len(samples))


def restrict_truncation(lam: STruncForm, u: int) -> STruncForm:
    if u < 0:
        raise ValueError("u must be non-negative")
    if u > lam.s:
        raise ValueError("can only restrict to a smaller truncation")
    return STruncForm(u, lam.form.project(u))


def check_chain_map(samples: Sequence[STruncForm], u: int) -> CheckReport:
    name = "restriction-chain-map"
    for n, lam in enumerate(samples):
        lhs = restrict_truncation(d_s(lam), u)
        rhs = d_s(restrict_truncation(lam, u))
        if lhs != rhs:
            return fail(name, sample=n, difference=lhs.form - rhs.form)
    return ok(name, samples=len(samples))


# --- the constructive Poincare lemma ----------------------------------------------------------
def _leaf_weight(fol: FoliationChart, mono) -> int:
    return sum(e for n, e in mono if n in fol.leaf)


def _leaf_homotopy(fol: FoliationChart, w: BigradedForm) -> BigradedForm:
    """Radial homotopy in the leaf coordinates, ``eta`` factors carried along.

    For a term ``f eta^A ^ theta^I`` the result is
    ``(-1)^|A| eta^A ^ sum_r (-1)^r x^{i_r} (int_0^1 t^(|I|-1) f(t x) dt) theta^(I - i_r)``.
    """
    fc = fol.frame_chart
    out = KForm.zero(fc, w.degree - 1)
    for key, coef in w.frame.comps.items():
        A = [n for n in key if n not in fol.leaf]
        I = [n for n in key if n in fol.leaf]
        if not I:
            continue
        sign_A = -1 if len(A) % 2 else 1
        integrated = Scalar.from_terms([(mono, c * Fraction(1, _leaf_weight(fol, mono) + len(I)))
                                        for mono, c in coef.terms.items()])
        for r, i in enumerate(I):
            rest = A + I[:r] + I[r + 1:]
            sign = sign_A * (-1 if r % 2 else 1)
            out = out + KForm(fc, len(rest), {tuple(rest): integrated * Scalar.var(i) * sign})
    return BigradedForm(fol, out)


def poincare_solve_ddouble(lam: BigradedForm) -> BigradedForm:
    """``mu`` of type ``(p, q)`` with ``d'' mu = lam`` for a d''-closed ``lam`` of type ``(p, q+1)``."""
    types = lam.types()
    if len(types) > 1:
        raise ValueError(f"expected a single type, got {types}")
    if types and types[0][1] == 0:
        raise ValueError("lam must have positive leaf degree")
    res = d_double(lam)
    if not res.is_zero():
        raise NotClosed(f"d'' lam = {res}")
    mu = _leaf_homotopy(lam.fol, lam)
    if d_double(mu) != lam:  # pragma: no cover - the homotopy identity
        raise ArithmeticError("leaf homotopy failed to invert d''")
    return mu


def _solve_levels(lam: STruncForm, top: int) -> Dict[int, BigradedForm]:
    """``mu_(j, k-1-j)`` for ``j = 0..top`` by the induction on ``j``."""
    fol = lam.fol
    mu: Dict[int, BigradedForm] = {}
    zero = BigradedForm.zero(fol, lam.k - 1)
    for j in range(top + 1):
        rhs = (lam.component(j) - d_prime(mu.get(j - 1, zero)).component(j, lam.k - j)
               - d_partial(mu.get(j - 2, zero)).component(j, lam.k - j))
        mu[j] = zero if rhs.is_zero() else poincare_solve_ddouble(rhs)
    return mu


def poincare_solve_ds(lam: STruncForm) -> Dict[str, object]:
    """Invert ``d_s`` on a ``d_s``-closed truncated form.

    For ``k > s`` the result is ``{"mu": STruncForm}`` with ``d_s mu = lam``.
    For ``k = s`` it is ``{"mu": BigradedForm, "nu": BigradedForm}`` with
    ``lam = d mu + nu`` as full forms and ``nu`` basic of type ``(s, 0)``.
    """
    s, k, fol = lam.s, lam.k, lam.fol
    res = d_s(lam)
    if not res.is_zero():
        raise NotClosed(f"d_s lam = {res}")
    if k < s:
        raise ValueError("the truncated Poincare lemma needs k >= s")
    if k > s:
        levels = _solve_levels(lam, s)
        total = BigradedForm.zero(fol, k - 1)
        for comp in levels.values():
            total = total + comp
        mu = STruncForm(s, total)
        if d_s(mu) != lam:  # pragma: no cover - guarded by the induction
            raise ArithmeticError("d_s mu does not reproduce lam")
        return {"mu": mu}
    if k == 0:
        return {"mu": None, "nu": lam.form}
    levels = _solve_levels(lam, s - 1)
    zero = BigradedForm.zero(fol, k - 1)
    mu = zero
    for comp in levels.values():
        mu = mu + comp
    nu = (lam.component(s) - d_prime(levels.get(s - 1, zero)).component(s, 0)
          - d_partial(levels.get(s - 2, zero)).component(s, 0))
    if not d_double(nu).is_zero():  # pragma: no cover
        raise ArithmeticError("nu is not basic")
    return {"mu": mu, "nu": nu}
