"""Vector fields, differential forms and multivectors on a single chart.

Conventions (fixed throughout the package):

* ``dx^I`` with ``I`` increasing is stored by its coordinate-name tuple and
  ``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)``, so ``(dx^dy)(D[x], D[y]) = 1``.
* Contraction fills the first slot: ``(i(X) w)(Y, ...) = w(X, Y, ...)``.
  Hence ``flat(lam, X) = i(X) lam`` gives ``flat(lam, X)(Y) = lam(X, Y)`` and
  ``sharp(P, s) = i(s) P`` gives ``b(sharp(P, s)) = P(s, b)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import DegreeMismatch
from .scalar import ONE, ZERO, FORMAL_CONSTANT, Scalar, as_scalar

RESERVED = frozenset({"i", FORMAL_CONSTANT, "t", "d", "D"})


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names of the single global chart ``R^m``."""

    coords: Tuple[str, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinates in {coords}")
        if FORMAL_CONSTANT in coords or "i" in coords:
            raise ValueError("'i' and 'c' cannot be coordinates")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def extend(self, *names: str) -> "Chart":
        return Chart(self.coords + tuple(names))

    def contains(self, other: "Chart") -> bool:
        """True when ``other`` is a prefix-preserving sub-chart of ``self``."""
        pos = [self.coords.index(c) for c in other.coords if c in self.coords]
        return len(pos) == other.dim and pos == sorted(pos)

    def coordinate(self, name: str) -> Scalar:
        if name not in self.coords:
            raise KeyError(name)
        return Scalar.var(name)

    def coordinates(self) -> Tuple[Scalar, ...]:
        return tuple(Scalar.var(n) for n in self.coords)

    def sort_key(self, names: Iterable[str]):
        return tuple(self.coords.index(n) for n in names)


def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class _Alternating:
    """Common storage for k-forms and k-vectors: increasing name tuples -> Scalar."""

    __slots__ = ("chart", "degree", "_comps")
    kind = "alternating"

    def __init__(self, chart: Chart, degree: int, comps: Mapping[Tuple[str, ...], object] = ()):
        self.chart = chart
        self.degree = degree
        out: Dict[Tuple[str, ...], Scalar] = {}
        for key, val in dict(comps).items():
            key = tuple(key)
            if len(key) != degree:
                raise DegreeMismatch(f"index {key} does not have length {degree}")
            if len(set(key)) != len(key):
                continue
            idx = chart.sort_key(key)
            order = sorted(range(degree), key=lambda r: idx[r])
            sk = tuple(key[r] for r in order)
            val = as_scalar(val) * _perm_sign(order)
            acc = out.get(sk, ZERO) + val
            if acc.is_zero():
                out.pop(sk, None)
            else:
                out[sk] = acc
        self._comps = out

    @classmethod
    def _raw(cls, chart, degree, comps):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj._comps = {k: v for k, v in comps.items() if not v.is_zero()}
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._raw(chart, degree, {})

    @property
    def comps(self) -> Dict[Tuple[str, ...], Scalar]:
        return dict(self._comps)

    def __getitem__(self, key) -> Scalar:
        if isinstance(key, str):
            key = (key,)
        key = tuple(key)
        if len(set(key)) != len(key):
            return ZERO
        idx = self.chart.sort_key(key)
        order = sorted(range(len(key)), key=lambda r: idx[r])
        sk = tuple(key[r] for r in order)
        return self._comps.get(sk, ZERO) * _perm_sign(order)

    def is_zero(self) -> bool:
        return not self._comps

    def _check(self, other):
        if type(other) is not type(self):
            raise DegreeMismatch(f"cannot combine {self.kind} with {type(other).__name__}")
        if other.degree != self.degree:
            raise DegreeMismatch(f"degree {self.degree} vs {other.degree}")
        if other.chart != self.chart:
            raise ValueError("objects live on different charts")

    def __add__(self, other):
        self._check(other)
        out = dict(self._comps)
        for k, v in other._comps.items():
            out[k] = out.get(k, ZERO) + v
        return self._raw(self.chart, self.degree, out)

    def __neg__(self):
        return self._raw(self.chart, self.degree, {k: -v for k, v in self._comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = Scalar._coerce(f)
        if f is NotImplemented:
            return NotImplemented
        return self._raw(self.chart, self.degree, {k: v * f for k, v in self._comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)) and self.degree == 0:
            return self._comps.get((), ZERO) == other
        if type(other) is not type(self):
            return NotImplemented
        return self.degree == other.degree and self.chart == other.chart and self._comps == other._comps

    def __hash__(self):
        return hash((self.kind, self.degree, frozenset(self._comps.items())))

    def wedge(self, other):
        if isinstance(other, Scalar):
            return self * other
        if type(other) is not type(self):
            raise DegreeMismatch(f"cannot wedge {self.kind} with {type(other).__name__}")
        if other.chart != self.chart:
            raise ValueError("objects live on different charts")
        out: Dict[Tuple[str, ...], Scalar] = {}
        for ka, va in self._comps.items():
            sa = set(ka)
            for kb, vb in other._comps.items():
                if sa.intersection(kb):
                    continue
                key = ka + kb
                idx = self.chart.sort_key(key)
                order = sorted(range(len(key)), key=lambda r: idx[r])
                sk = tuple(key[r] for r in order)
                out[sk] = out.get(sk, ZERO) + va * vb * _perm_sign(order)
        return self._raw(self.chart, self.degree + other.degree, out)

    __xor__ = wedge

    def on(self, chart: Chart):
        """Reinterpret on a chart containing this one (e.g. after appending ``t``)."""
        if not chart.contains(self.chart):
            raise ValueError(f"{chart.coords} does not contain {self.chart.coords}")
        return self._raw(chart, self.degree, self._comps)

    def map_coeffs(self, fn):
        return self._raw(self.chart, self.degree, {k: fn(v) for k, v in self._comps.items()})

    def subs(self, values):
        return self.map_coeffs(lambda s: s.subs(values))

    def _basis_symbol(self, key):
        raise NotImplementedError

    def __str__(self):
        if not self._comps:
            return "0"
        parts = []
        for key in sorted(self._comps, key=self.chart.sort_key):
            basis = "^".join(self._basis_symbol(n) for n in key)
            coef = self._comps[key]
            if not key:
                parts.append(f"({coef})")
            elif coef == ONE:
                parts.append(basis)
            else:
                parts.append(f"({coef})*{basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class KForm(_Alternating):
    """Differential k-form; degree 0 carries a single Scalar at key ``()``."""

    __slots__ = ()
    kind = "form"

    def _basis_symbol(self, name):
        return f"d[{name}]"

    @classmethod
    def scalar(cls, chart: Chart, f) -> "KForm":
        return cls(chart, 0, {(): as_scalar(f)})

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "KForm":
        chart.index(name)
        return cls(chart, 1, {(name,): ONE})

    def __call__(self, *fields: "VectorField") -> Scalar:
        """Evaluate on ``degree`` vector fields."""
        if len(fields) != self.degree:
            raise DegreeMismatch(f"{self.degree}-form evaluated on {len(fields)} fields")
        total = ZERO
        fields = list(fields)
        for key, coef in self._comps.items():
            total = total + coef * _det(key, fields)
        return total


class KMultivector(_Alternating):
    """Multivector field of degree k (k = 1 is interchangeable with VectorField)."""

    __slots__ = ()
    kind = "multivector"

    def _basis_symbol(self, name):
        return f"D[{name}]"

    def __call__(self, *forms: KForm) -> Scalar:
        if len(forms) != self.degree:
            raise DegreeMismatch(f"{self.degree}-vector evaluated on {len(forms)} forms")
        total = ZERO
        for key, coef in self._comps.items():
            total = total + coef * _det(key, list(forms))
        return total

    def to_vector_field(self) -> "VectorField":
        if self.degree != 1:
            raise DegreeMismatch("only 1-vectors are vector fields")
        return VectorField(self.chart, {k[0]: v for k, v in self._comps.items()})


def _det(key, duals) -> Scalar:
    """det[ dual_r ( basis_key[s] ) ] for basis covectors/vectors."""
    k = len(key)
    if k == 0:
        return ONE
    if k == 1:
        return duals[0].component(key[0])
    if k == 2:
        a, b = duals
        return a.component(key[0]) * b.component(key[1]) - a.component(key[1]) * b.component(key[0])
    total = ZERO
    first = duals[0]
    for s, name in enumerate(key):
        c = first.component(name)
        if c.is_zero():
            continue
        minor = _det(key[:s] + key[s + 1:], duals[1:])
        total = total + (c * minor if s % 2 == 0 else -(c * minor))
    return total


class VectorField:
    """Vector field ``sum X^a D[x^a]`` with Scalar components."""

    __slots__ = ("chart", "_comps")

    def __init__(self, chart: Chart, comps: Mapping[str, object] = ()):
        self.chart = chart
        out = {}
        for k, v in dict(comps).items():
            chart.index(k)
            v = as_scalar(v)
            if not v.is_zero():
                out[k] = out.get(k, ZERO) + v
        self._comps = {k: v for k, v in out.items() if not v.is_zero()}

    @classmethod
    def zero(cls, chart):
        return cls(chart)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        return cls(chart, {name: ONE})

    @property
    def comps(self):
        return dict(self._comps)

    def component(self, name: str) -> Scalar:
        return self._comps.get(name, ZERO)

    def components(self):
        return [self.component(n) for n in self.chart.coords]

    def is_zero(self):
        return not self._comps

    def __call__(self, f) -> Scalar:
        """Directional derivative X(f)."""
        f = as_scalar(f)
        total = ZERO
        for name, coef in self._comps.items():
            df = f.diff(name)
            if not df.is_zero():
                total = total + coef * df
        return total

    def _check(self, other):
        if not isinstance(other, VectorField):
            raise DegreeMismatch(f"cannot combine vector field with {type(other).__name__}")
        if other.chart != self.chart:
            raise ValueError("vector fields live on different charts")

    def __add__(self, other):
        self._check(other)
        out = dict(self._comps)
        for k, v in other._comps.items():
            out[k] = out.get(k, ZERO) + v
        return VectorField(self.chart, out)

    def __neg__(self):
        return VectorField(self.chart, {k: -v for k, v in self._comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = Scalar._coerce(f)
        if f is NotImplemented:
            return NotImplemented
        return VectorField(self.chart, {k: v * f for k, v in self._comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self._comps == other._comps

    def __hash__(self):
        return hash(frozenset(self._comps.items()))

    def as_multivector(self) -> KMultivector:
        return KMultivector(self.chart, 1, {(k,): v for k, v in self._comps.items()})

    def wedge(self, other) -> KMultivector:
        if isinstance(other, VectorField):
            other = other.as_multivector()
        return self.as_multivector().wedge(other)

    __xor__ = wedge

    def on(self, chart: Chart) -> "VectorField":
        if not chart.contains(self.chart):
            raise ValueError(f"{chart.coords} does not contain {self.chart.coords}")
        return VectorField(chart, self._comps)

    def map_coeffs(self, fn):
        return VectorField(self.chart, {k: fn(v) for k, v in self._comps.items()})

    def subs(self, values):
        return self.map_coeffs(lambda s: s.subs(values))

    def __str__(self):
        if not self._comps:
            return "0"
        parts = []
        for name in self.chart.coords:
            if name in self._comps:
                coef = self._comps[name]
                parts.append(f"D[{name}]" if coef == ONE else f"({coef})*D[{name}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"VectorField({self})"


# 1-form component access shares the VectorField API used by _det
def _form_component(self, name: str) -> Scalar:
    if self.degree != 1:
        raise DegreeMismatch("component() is defined for 1-forms/1-vectors only")
    return self._comps.get((name,), ZERO)


_Alternating.component = _form_component


# operators -------------------------------------------------------------------------------
def exterior_derivative(w: KForm) -> KForm:
    if not isinstance(w, KForm):
        raise DegreeMismatch("exterior derivative needs a KForm")
    out: Dict[Tuple[str, ...], Scalar] = {}
    chart = w.chart
    for key, coef in w._comps.items():
        for name in chart.coords:
            if name in key:
                continue
            dc = coef.diff(name)
            if dc.is_zero():
                continue
            full = (name,) + key
            idx = chart.sort_key(full)
            order = sorted(range(len(full)), key=lambda r: idx[r])
            sk = tuple(full[r] for r in order)
            out[sk] = out.get(sk, ZERO) + dc * _perm_sign(order)
    return KForm._raw(chart, w.degree + 1, out)


d = exterior_derivative


def differential(chart: Chart, f) -> KForm:
    return exterior_derivative(KForm.scalar(chart, f))


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    X._check(Y)
    out = {}
    for name in X.chart.coords:
        v = X(Y.component(name)) - Y(X.component(name))
        if not v.is_zero():
            out[name] = v
    return VectorField(X.chart, out)


def interior(arg1, arg2):
    """Contraction of a degree-1 object into the first slot of the other.

    ``interior(X, w)`` for a vector field and a form, ``interior(s, P)`` for
    a 1-form and a multivector.  Scalars (degree 0) cannot be contracted.
    """
    if isinstance(arg1, VectorField):
        vec = arg1
        if not isinstance(arg2, KForm):
            raise DegreeMismatch("a vector field contracts into a KForm")
        target = arg2
    elif isinstance(arg1, KForm) and arg1.degree == 1:
        vec = arg1
        if not isinstance(arg2, KMultivector):
            raise DegreeMismatch("a 1-form contracts into a KMultivector")
        target = arg2
    elif isinstance(arg1, KMultivector) and arg1.degree == 1:
        return interior(arg1.to_vector_field(), arg2)
    else:
        raise DegreeMismatch(f"cannot contract {type(arg1).__name__}")
    if target.degree == 0:
        raise DegreeMismatch("cannot contract into a degree-0 object")
    if vec.chart != target.chart:
        raise ValueError("objects live on different charts")
    out: Dict[Tuple[str, ...], Scalar] = {}
    for key, coef in target._comps.items():
        for r, name in enumerate(key):
            c = vec.component(name)
            if c.is_zero():
                continue
            rest = key[:r] + key[r + 1:]
            term = coef * c
            out[rest] = out.get(rest, ZERO) + (term if r % 2 == 0 else -term)
    return type(target)._raw(target.chart, target.degree - 1, out)


def contract(arg1, arg2):
    """``i(X)w`` / ``i(s)P`` returning a Scalar when the result has degree 0."""
    res = interior(arg1, arg2)
    if res.degree == 0:
        return res._comps.get((), ZERO)
    return res


def pair(alpha: KForm, X: VectorField) -> Scalar:
    """alpha(X) for a 1-form and a vector field."""
    if not isinstance(alpha, KForm) or alpha.degree != 1:
        raise DegreeMismatch("pair() needs a 1-form")
    if alpha.chart != X.chart:
        raise ValueError("objects live on different charts")
    total = ZERO
    for (name,), coef in alpha._comps.items():
        c = X.component(name)
        if not c.is_zero():
            total = total + coef * c
    return total


def flat(lam: KForm, X: VectorField) -> KForm:
    if lam.degree != 2:
        raise DegreeMismatch("flat needs a 2-form")
    return interior(X, lam)


def sharp(P: KMultivector, sigma: KForm) -> VectorField:
    if P.degree != 2:
        raise DegreeMismatch("sharp needs a bivector")
    return interior(sigma, P).to_vector_field()


def lie_derivative_form(X: VectorField, w: KForm) -> KForm:
    """Cartan formula L_X = i(X) d + d i(X)."""
    if w.degree == 0:
        return KForm.scalar(w.chart, X(w._comps.get((), ZERO)))
    return interior(X, exterior_derivative(w)) + exterior_derivative(interior(X, w))


def lie_derivative_multivector(X: VectorField, P: KMultivector) -> KMultivector:
    """L_X P by the Leibniz rule over the coordinate wedge factors."""
    chart = P.chart
    out = KMultivector.zero(chart, P.degree)
    for key, coef in P._comps.items():
        acc = KMultivector(chart, P.degree, {key: X(coef)})
        for r in range(len(key)):
            piece = None
            for s, name in enumerate(key):
                fac = VectorField.coordinate(chart, name)
                if s == r:
                    fac = lie_bracket(X, fac)
                fac = fac.as_multivector()
                piece = fac if piece is None else piece.wedge(fac)
            acc = acc + piece * coef
        out = out + acc
    return out


def jacobiator(P: KMultivector) -> KMultivector:
    """Trivector J(dx^a, dx^b, dx^e) = sum over cyclic (a,b,e) of {x^a, {x^b, x^e}}."""
    if P.degree != 2:
        raise DegreeMismatch("jacobiator needs a bivector")
    chart = P.chart
    dx = {n: KForm.coordinate(chart, n) for n in chart.coords}
    bracket = {}

    def pb(f: Scalar, g: Scalar) -> Scalar:
        return P(differential(chart, f), differential(chart, g))

    for a, b in combinations(chart.coords, 2):
        bracket[(a, b)] = P(dx[a], dx[b])
    comps = {}
    for a, b, e in combinations(chart.coords, 3):
        xa, xb, xe = (Scalar.var(n) for n in (a, b, e))
        val = pb(xa, bracket[(b, e)]) + pb(xb, bracket.get((a, e), ZERO) * -1) + pb(xe, bracket[(a, b)])
        comps[(a, b, e)] = val
    return KMultivector(chart, 3, comps)


def poisson_check(P: KMultivector) -> bool:
    return jacobiator(P).is_zero()
