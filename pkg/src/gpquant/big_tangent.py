"""Sections of TM + T*M and of the stable bundle (TM x R) + (T*M x R)."""
from __future__ import annotations

from typing import List, Optional

from .calculus import (
    Chart,
    KForm,
    VectorField,
    differential,
    lie_bracket,
    lie_derivative_form,
    pair,
)
from .scalar import ZERO, Scalar, as_scalar

_HALF = Scalar.const(1) / 2


class BigSection:
    """A pair ``(X, alpha)`` of a vector field and a 1-form on one chart."""

    __slots__ = ("vf", "form")

    def __init__(self, vf: VectorField, form: KForm):
        if form.degree != 1:
            raise ValueError("the form part of a big section must be a 1-form")
        if vf.chart != form.chart:
            raise ValueError("vector and form parts live on different charts")
        self.vf = vf
        self.form = form

    @classmethod
    def zero(cls, chart: Chart) -> "BigSection":
        return cls(VectorField.zero(chart), KForm.zero(chart, 1))

    @classmethod
    def of(cls, chart: Chart, vf: Optional[VectorField] = None, form: Optional[KForm] = None):
        return cls(vf if vf is not None else VectorField.zero(chart),
                   form if form is not None else KForm.zero(chart, 1))

    @property
    def chart(self) -> Chart:
        return self.vf.chart

    def components(self) -> List[Scalar]:
        chart = self.chart
        return self.vf.components() + [self.form.component(n) for n in chart.coords]

    def is_zero(self) -> bool:
        return self.vf.is_zero() and self.form.is_zero()

    def __add__(self, other: "BigSection") -> "BigSection":
        return BigSection(self.vf + other.vf, self.form + other.form)

    def __neg__(self):
        return BigSection(-self.vf, -self.form)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f) -> "BigSection":
        return BigSection(self.vf * f, self.form * f)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BigSection) and self.vf == other.vf and self.form == other.form

    def __hash__(self):
        return hash((self.vf, self.form))

    def on(self, chart: Chart) -> "BigSection":
        return BigSection(self.vf.on(chart), self.form.on(chart))

    def subs(self, values) -> "BigSection":
        return BigSection(self.vf.subs(values), self.form.subs(values))

    def __str__(self):
        return f"({self.vf}, {self.form})"

    __repr__ = __str__


class StableSection:
    """``({X, u}, {alpha, v})`` in the stable big tangent bundle."""

    __slots__ = ("vf", "u", "form", "v")

    def __init__(self, vf: VectorField, u, form: KForm, v):
        if form.degree != 1 or vf.chart != form.chart:
            raise ValueError("malformed stable section")
        self.vf = vf
        self.u = as_scalar(u)
        self.form = form
        self.v = as_scalar(v)

    @classmethod
    def embed(cls, s: BigSection, u=0, v=0) -> "StableSection":
        return cls(s.vf, u, s.form, v)

    @classmethod
    def zero(cls, chart: Chart) -> "StableSection":
        return cls(VectorField.zero(chart), ZERO, KForm.zero(chart, 1), ZERO)

    @property
    def chart(self) -> Chart:
        return self.vf.chart

    @property
    def big(self) -> BigSection:
        return BigSection(self.vf, self.form)

    def components(self) -> List[Scalar]:
        chart = self.chart
        return (self.vf.components() + [self.u]
                + [self.form.component(n) for n in chart.coords] + [self.v])

    def is_zero(self) -> bool:
        return self.vf.is_zero() and self.form.is_zero() and self.u.is_zero() and self.v.is_zero()

    def __add__(self, other):
        return StableSection(self.vf + other.vf, self.u + other.u, self.form + other.form, self.v + other.v)

    def __neg__(self):
        return StableSection(-self.vf, -self.u, -self.form, -self.v)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = as_scalar(f)
        return StableSection(self.vf * f, self.u * f, self.form * f, self.v * f)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, StableSection) and self.vf == other.vf and self.u == other.u
                and self.form == other.form and self.v == other.v)

    def __hash__(self):
        return hash((self.vf, self.u, self.form, self.v))

    def __str__(self):
        return f"({{{self.vf}, {self.u}}}, {{{self.form}, {self.v}}})"

    __repr__ = __str__


def pairing_g(a, b) -> Scalar:
    """Neutral metric; the stable variant adds the ``u v`` cross terms."""
    if type(a) is not type(b):
        raise TypeError("pairing_g needs two sections of the same kind")
    val = pair(a.form, b.vf) + pair(b.form, a.vf)
    if isinstance(a, StableSection):
        val = val + a.u * b.v + b.u * a.v
    return val * _HALF


def pairing_omega(a: BigSection, b: BigSection) -> Scalar:
    return (pair(a.form, b.vf) - pair(b.form, a.vf)) * _HALF


def courant_bracket(a: BigSection, b: BigSection) -> BigSection:
    X, al = a.vf, a.form
    Y, be = b.vf, b.form
    form = (lie_derivative_form(X, be) - lie_derivative_form(Y, al)
            + differential(a.chart, pair(al, Y) - pair(be, X)) * _HALF)
    return BigSection(lie_bracket(X, Y), form)


def wade_bracket(a: StableSection, b: StableSection) -> StableSection:
    X1, u1, a1, v1 = a.vf, a.u, a.form, a.v
    X2, u2, a2, v2 = b.vf, b.u, b.form, b.v
    chart = a.chart
    d = lambda f: differential(chart, f)  # noqa: E731
    a1X2 = pair(a1, X2)
    a2X1 = pair(a2, X1)
    form = (lie_derivative_form(X1, a2) - lie_derivative_form(X2, a1)
            + d(a1X2 - a2X1) * _HALF
            + a2 * u1 - a1 * u2
            + (d(u1) * v2 - d(u2) * v1 - d(v2) * u1 + d(v1) * u2) * _HALF)
    u = X1(u2) - X2(u1)
    v = X1(v2) - X2(v1) + (a1X2 - a2X1 - u2 * v1 + u1 * v2) * _HALF
    return StableSection(lie_bracket(X1, X2), u, form, v)
