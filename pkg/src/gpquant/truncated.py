"""Truncated cochains on a big-isotropic structure and their coboundary.

An s-cochain eats ``s-1`` sections of E followed by one section of E'.
Cochains here are evaluated directly on sections; the frame-table kind
re-expands its arguments in the structure frames first.

Sign convention of the coboundary: the last sum enters as
``+ sum_a (-1)^a T(..., ^X_a, ..., [X_a, Y])``, so that in degree one

    d_tr T (X, Y) = X(T(Y)) - Y(T(X)) - T([X, Y])

which is the Chevalley-Eilenberg differential of the pair (E, E').
"""
from __future__ import annotations

from typing import Dict, Mapping, Sequence, Tuple

from .big_tangent import BigSection, courant_bracket, pairing_omega
from .calculus import KForm, VectorField, pair
from .errors import DegreeMismatch, IndeterminateExpansion
from .scalar import ZERO, Scalar, as_scalar
from .report import CheckReport, fail, ok
from .structures import YES, BigIsoStructure, in_span


class TruncCochain:
    degree: int

    def evaluate(self, xs: Sequence[BigSection], y: BigSection) -> Scalar:  # pragma: no cover
        raise NotImplementedError

    def __call__(self, *args: BigSection) -> Scalar:
        if len(args) != self.degree:
            raise DegreeMismatch(f"a {self.degree}-cochain takes {self.degree} arguments")
        return self.evaluate(list(args[:-1]), args[-1])


class ZeroCochain(TruncCochain):
    def __init__(self, degree: int):
        self.degree = degree

    def evaluate(self, xs, y):
        return ZERO


class FormBacked(TruncCochain):
    """``j(lam)``: evaluate the form on the vector parts."""

    def __init__(self, lam: KForm):
        self.lam = lam
        self.degree = lam.degree

    def evaluate(self, xs, y):
        if self.degree == 0:
            return self.lam[()]
        return self.lam(*[x.vf for x in xs], y.vf)


def j_map(lam: KForm) -> FormBacked:
    return FormBacked(lam)


class PairBacked(TruncCochain):
    """The 1-cochain ``(Y, beta) -> nu(Y) + beta(U)``."""

    degree = 1

    def __init__(self, U: VectorField, nu: KForm):
        self.U = U
        self.nu = nu

    def evaluate(self, xs, y):
        return pair(self.nu, y.vf) + pair(y.form, self.U)


class OmegaE(TruncCochain):
    degree = 2

    def evaluate(self, xs, y):
        return pairing_omega(xs[0], y)


class FrameTable(TruncCochain):
    """Values on frame tuples ``(i_1, .., i_{s-1}, a)``: E indices then one E' index."""

    def __init__(self, S: BigIsoStructure, degree: int, values: Mapping[Tuple[int, ...], object]):
        self.S = S
        self.degree = degree
        self.values: Dict[Tuple[int, ...], Scalar] = {tuple(k): as_scalar(v) for k, v in values.items()}

    def _value(self, key):
        head, last = key[:-1], key[-1]
        if len(set(head)) != len(head):
            return ZERO
        order = sorted(range(len(head)), key=lambda r: head[r])
        sign = 1
        for i in range(len(order)):
            for j in range(i + 1, len(order)):
                if order[i] > order[j]:
                    sign = -sign
        sk = tuple(head[r] for r in order) + (last,)
        return self.values.get(sk, ZERO) * sign

    def evaluate(self, xs, y):
        exps = [_expand(x, self.S.gensE) for x in xs] + [_expand(y, self.S.gensEp)]
        return _multilinear(exps, self._value)


def _expand(s: BigSection, gens):
    mem = in_span(s, gens)
    if mem.status != YES:
        raise IndeterminateExpansion(f"{s} has no polynomial frame expansion ({mem.status})",
                                     mem.locus)
    return mem.coeffs


def _multilinear(exps, value) -> Scalar:
    total = ZERO

    def rec(pos, key, coef):
        nonlocal total
        if pos == len(exps):
            total = total + coef * value(tuple(key))
            return
        for idx, c in enumerate(exps[pos]):
            if not c.is_zero():
                rec(pos + 1, key + [idx], coef * c)

    rec(0, [], Scalar.const(1))
    return total


class Coboundary(TruncCochain):
    """``d_tr T`` evaluated by the alternating formula."""

    def __init__(self, S: BigIsoStructure, T: TruncCochain):
        self.S = S
        self.T = T
        self.degree = T.degree + 1

    def evaluate(self, xs, y):
        T = self.T
        s = len(xs)
        total = ZERO
        for a in range(s):
            rest = xs[:a] + xs[a + 1:]
            sign = 1 if a % 2 == 0 else -1  # (-1)^{(a+1)+1}
            total = total + xs[a].vf(T.evaluate(rest, y)) * sign
        sign_s = 1 if s % 2 == 0 else -1
        total = total + y.vf(T.evaluate(xs[:-1], xs[-1])) * sign_s
        for a in range(s):
            for b in range(a + 1, s):
                br = courant_bracket(xs[a], xs[b])
                rest = [x for r, x in enumerate(xs) if r not in (a, b)]
                sign = 1 if (a + b) % 2 == 0 else -1
                total = total + T.evaluate([br] + rest, y) * sign
        for a in range(s):
            rest = xs[:a] + xs[a + 1:]
            br = courant_bracket(xs[a], y)
            sign = -1 if a % 2 == 0 else 1  # (-1)^a, a counted from 1
            total = total + T.evaluate(rest, br) * sign
        return total


def d_tr(S: BigIsoStructure, T: TruncCochain) -> Coboundary:
    return Coboundary(S, T)


def d_tr_eval(S: BigIsoStructure, T: TruncCochain, xs: Sequence[BigSection], y: BigSection) -> Scalar:
    return Coboundary(S, T).evaluate(list(xs), y)


def eval_cochain(T: TruncCochain, xs: Sequence[BigSection], y: BigSection) -> Scalar:
    return T.evaluate(list(xs), y)


def frame_section(gens: Sequence[BigSection], coeffs: Sequence) -> BigSection:
    """``sum coeffs[i] * gens[i]``."""
    out = BigSection.zero(gens[0].chart)
    for c, g in zip(coeffs, gens):
        out = out + g * as_scalar(c)
    return out


def check_complex(S: BigIsoStructure, T: TruncCochain, tuples) -> CheckReport:
    """``d_tr d_tr T = 0`` and ``d_tr omega_E = 0`` on the supplied argument tuples.

    Each tuple lists E-sections followed by one E'-section; its length fixes
    which identities apply (``T.degree + 2`` for the first, 3 for the second).
    """
    name = "complex"
    dd = Coboundary(S, Coboundary(S, T))
    dw = Coboundary(S, OmegaE())
    count = 0
    for n, args in enumerate(tuples):
        args = list(args)
        for label, C in (("d_tr^2", dd), ("d_tr omega_E", dw)):
            if len(args) != C.degree:
                continue
            val = C.evaluate(args[:-1], args[-1])
            count += 1
            if not val.is_zero():
                return fail(name, identity=label, tuple=n, residual=val)
    return ok(name, evaluations=count)
