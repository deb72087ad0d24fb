"""Exact polynomials over the Gaussian rationals.

A :class:`Scalar` is a finite sum of monomials ``coef * x1**e1 * ... * c**k``
where ``coef = a + b*i`` with ``a, b`` rational.  Variables are identified by
name.  The name ``c`` is by convention the formal constant standing for
``2*pi*i``; it is an ordinary indeterminate here and is never a chart
coordinate, so it is never differentiated.

Terms are stored in a dict keyed by monomials (sorted tuples of
``(name, exponent)`` pairs), with zero coefficients dropped, so equality and
the zero test are exact dictionary comparisons.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]

FORMAL_CONSTANT = "c"


class GaussianRational:
    """``re + im*i`` with rational parts and ``im != 0``.

    Purely real values are always represented as plain :class:`Fraction`;
    use :func:`gauss` to build a coefficient from two parts.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if not _is_number(other):
            return NotImplemented
        re, im = _parts(other)
        return gauss(self.re + re, self.im + im)

    __radd__ = __add__

    def __sub__(self, other):
        if not _is_number(other):
            return NotImplemented
        re, im = _parts(other)
        return gauss(self.re - re, self.im - im)

    def __rsub__(self, other):
        if not _is_number(other):
            return NotImplemented
        re, im = _parts(other)
        return gauss(re - self.re, im - self.im)

    def __mul__(self, other):
        if not _is_number(other):
            return NotImplemented
        re, im = _parts(other)
        return gauss(self.re * re - self.im * im, self.re * im + self.im * re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_number(other):
            return NotImplemented
        re, im = _parts(other)
        n = re * re + im * im
        return gauss((self.re * re + self.im * im) / n, (self.im * re - self.re * im) / n)

    def __rtruediv__(self, other):
        if not _is_number(other):
            return NotImplemented
        re, im = _parts(other)
        n = self.re * self.re + self.im * self.im
        return gauss((re * self.re + im * self.im) / n, (im * self.re - re * self.im) / n)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)


Coefficient = Union[Fraction, GaussianRational]


def _is_number(x) -> bool:
    return isinstance(x, (GaussianRational, int, Fraction))


def _parts(x):
    if isinstance(x, GaussianRational):
        return x.re, x.im
    return Fraction(x), Fraction(0)


def gauss(re, im=0) -> Coefficient:
    """Normalized coefficient: a Fraction when the imaginary part vanishes."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return GaussianRational(re, im)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """a / b if b divides a, else None."""
    da = dict(a)
    for v, e in b:
        if da.get(v, 0) < e:
            return None
        da[v] -= e
    return tuple(sorted((v, e) for v, e in da.items() if e))


class Scalar:
    """Immutable exact polynomial with Gaussian-rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Coefficient]] = None):
        # callers pass normalized dicts (no zero coefficients)
        self._terms: Dict[Monomial, Coefficient] = dict(terms) if terms else {}
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, GaussianRational):
            coef = value
        elif isinstance(value, complex):
            raise TypeError("float complex values are not exact; use gauss()")
        elif isinstance(value, float):
            raise TypeError("floats are not exact; use Fraction")
        else:
            coef = Fraction(value)
        return cls({(): coef}) if coef else cls()

    @classmethod
    def var(cls, name: str) -> "Scalar":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def from_terms(cls, pairs: Iterable[Tuple[Mapping[str, int], Coefficient]]) -> "Scalar":
        acc: Dict[Monomial, Coefficient] = {}
        for mono, coef in pairs:
            key = tuple(sorted((v, e) for v, e in dict(mono).items() if e))
            acc[key] = acc.get(key, 0) + coef
        return cls({k: v for k, v in acc.items() if v})

    # inspection ---------------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Coefficient]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Coefficient:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(v for mono in self._terms for v, _ in mono)

    def degree(self, name: Optional[str] = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e for _, e in mono) for mono in self._terms)
        return max(dict(mono).get(name, 0) for mono in self._terms)

    def is_real(self) -> bool:
        return all(not isinstance(v, GaussianRational) for v in self._terms.values())

    def __len__(self):
        return len(self._terms)

    # arithmetic ---------------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Rational, GaussianRational)):
            return Scalar.const(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return Scalar({k: -v for k, v in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Scalar(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return Scalar()
        out: Dict[Monomial, Coefficient] = {}
        for ka, va in self._terms.items():
            for kb, vb in other._terms.items():
                k = _mono_mul(ka, kb)
                s = out.get(k)
                p = va * vb
                out[k] = p if s is None else s + p
        return Scalar({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero constant only; see :meth:`divide_exact`."""
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.is_constant() or other.is_zero():
            raise ZeroDivisionError("Scalar division requires a nonzero constant divisor")
        inv = 1 / other.constant_value()
        return self * Scalar.const(inv)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = Scalar.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugate of the coefficients (variables are treated as real)."""
        return Scalar({k: (v.conjugate() if isinstance(v, GaussianRational) else v)
                       for k, v in self._terms.items()})

    # calculus ---------------------------------------------------------------
    def diff(self, name: str) -> "Scalar":
        out: Dict[Monomial, Coefficient] = {}
        for mono, coef in self._terms.items():
            for idx, (v, e) in enumerate(mono):
                if v == name:
                    new = mono[:idx] + (((v, e - 1),) if e > 1 else ()) + mono[idx + 1:]
                    out[new] = out.get(new, 0) + coef * e
                    break
        return Scalar({k: v for k, v in out.items() if v})

    def subs(self, values: Mapping[str, object]) -> "Scalar":
        """Substitute Scalars (or numbers) for variables."""
        if not values:
            return self
        vals = {k: Scalar._coerce(v) for k, v in values.items()}
        cache: Dict[Tuple[str, int], Scalar] = {}
        result = Scalar()
        for mono, coef in self._terms.items():
            kept = []
            factor = Scalar.const(coef)
            for v, e in mono:
                if v in vals:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = vals[v] ** e
                    factor = factor * cache[key]
                else:
                    kept.append((v, e))
            result = result + factor * Scalar({tuple(kept): Fraction(1)})
        return result

    # exact division -------------------------------------------------------------
    def divide_exact(self, other: "Scalar") -> Optional["Scalar"]:
        """Return ``self / other`` when it is a polynomial, else ``None``.

        Multivariate division by a single divisor under lex order; the
        remainder vanishes iff ``other`` divides ``self``.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        if self.is_zero():
            return Scalar()
        if other.is_constant():
            return self * Scalar.const(1 / other.constant_value())
        names = sorted(self.variables() | other.variables())

        def key(mono):
            d = dict(mono)
            return tuple(d.get(v, 0) for v in names)

        lead_m = max(other._terms, key=key)
        lead_c = other._terms[lead_m]
        rem = dict(self._terms)
        quot: Dict[Monomial, Coefficient] = {}
        while rem:
            m = max(rem, key=key)
            q_m = _mono_div(m, lead_m)
            if q_m is None:
                return None
            q_c = rem[m] / lead_c
            quot[q_m] = quot.get(q_m, 0) + q_c
            for om, oc in other._terms.items():
                k = _mono_mul(q_m, om)
                v = rem.get(k, 0) - q_c * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return Scalar({k: v for k, v in quot.items() if v})

    # printing ---------------------------------------------------------------------
    def sort_key(self):
        return sorted(self._terms, key=_mono_print_key)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_mono_print_key):
            coef = self._terms[mono]
            parts.append(_format_term(coef, mono))
        text = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                text += " - " + p[1:]
            else:
                text += " + " + p
        return text

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def _mono_print_key(mono: Monomial):
    return (-sum(e for _, e in mono), mono)


def _format_coef(coef: Coefficient) -> str:
    if isinstance(coef, GaussianRational):
        if coef.re == 0:
            return _format_imag(coef.im)
        im = _format_imag(coef.im)
        sep = "-" if im.startswith("-") else "+"
        return f"({coef.re}{sep}{im.lstrip('-')})"
    return str(coef)


def _format_imag(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}*i"


def _format_term(coef: Coefficient, mono: Monomial) -> str:
    factors = [v if e == 1 else f"{v}**{e}" for v, e in mono]
    if not factors:
        return _format_coef(coef)
    body = "*".join(factors)
    if coef == 1:
        return body
    if coef == -1:
        return "-" + body
    return f"{_format_coef(coef)}*{body}"


# convenience ------------------------------------------------------------------------
ZERO = Scalar()
ONE = Scalar.const(1)
I_UNIT = Scalar.const(GaussianRational(0, 1))
C = Scalar.var(FORMAL_CONSTANT)


def as_scalar(x) -> Scalar:
    s = Scalar._coerce(x)
    if s is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a Scalar")
    return s


def variables(names: str):
    """``q, p = variables("q p")``."""
    return tuple(Scalar.var(n) for n in names.split())


def to_sympy(s: Scalar):
    import sympy

    total = sympy.Integer(0)
    for mono, coef in s.terms.items():
        re, im = _parts(coef)
        term = sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(im.numerator, im.denominator)
        for v, e in mono:
            term *= sympy.Symbol(v) ** e
        total += term
    return sympy.expand(total)


def from_sympy(expr) -> Scalar:
    import sympy

    expr = sympy.expand(expr)
    syms = sorted(expr.free_symbols, key=lambda x: x.name)
    if not syms:
        val = sympy.nsimplify(expr)
        re, im = sympy.re(val), sympy.im(val)
        return Scalar.const(gauss(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))))
    poly = sympy.Poly(expr, *syms)
    pairs = []
    for exps, coef in poly.terms():
        coef = sympy.sympify(coef)
        re, im = sympy.re(coef), sympy.im(coef)
        pairs.append(({s.name: e for s, e in zip(syms, exps)},
                      gauss(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))))
    return Scalar.from_terms(pairs)
