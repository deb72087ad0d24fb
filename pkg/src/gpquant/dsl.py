"""The session language: a line-oriented file of declarations and check requests.

    manifold M dim 2 coords q p
    form lam = d[q]^d[p]
    vfield Z = D[p]
    structure S { E: (Z, d(q) * -1)  E': (D[q], d[p]), (D[p], -d[q]), (0, d[q]) }
    check integrable S

``D[x]`` and ``d[x]`` are coordinate fields and differentials, ``d(expr)``
the exterior derivative, ``^`` the wedge and ``**`` a power.  ``i`` and
``c`` are the imaginary unit and the formal constant; ``t`` is kept for the
fibre coordinate of the prequantization space.  Newlines end a statement
except inside braces; ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .big_tangent import BigSection
from .calculus import RESERVED, Chart, KForm, KMultivector, VectorField, d
from .prequantization import GPData
from .scalar import C, I_UNIT, Scalar


class DSLError(Exception):
    def __init__(self, message, line=0, col=0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DSLSyntaxError(DSLError):
    pass


class UnknownName(DSLError):
    pass


class ChartMismatch(DSLError):
    pass


class ReservedSymbol(DSLError):
    pass


class TypeMismatch(DSLError):
    pass


class DuplicateName(DSLError):
    pass


# --- tokens ---------------------------------------------------------------------------------
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|[-+*/^()\[\],=;{}:'])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos, line, start_of_line, depth = 0, 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - start_of_line + 1
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        pos = m.end()
        if kind == "nl":
            if depth == 0:
                out.append(Token("nl", "\n", line, col))
            line += 1
            start_of_line = pos
            continue
        if kind in ("ws", "comment"):
            continue
        if tok == "{":
            depth += 1
        elif tok == "}":
            depth -= 1
        out.append(Token(kind, tok, line, col))
    out.append(Token("nl", "\n", line, pos - start_of_line + 1))
    out.append(Token("eof", "", line, pos - start_of_line + 1))
    return out


# --- the session model ----------------------------------------------------------------------
@dataclass(frozen=True)
class Ref:
    """A check argument naming a structure, g.p. data, polarization or foliation."""

    name: str


@dataclass
class StructureDecl:
    gensE: List[BigSection]
    gensEp: List[BigSection]


@dataclass
class PolarizationDecl:
    gensP: List[BigSection]
    gensPp: Optional[List[BigSection]]
    gensTME: List[BigSection] = field(default_factory=list)
    gensTMEp: Optional[List[BigSection]] = None


@dataclass
class FoliationDecl:
    dimF: int
    qframe: List[VectorField]


@dataclass
class CheckRequest:
    kind: str
    args: Tuple
    options: Tuple[Tuple[str, str], ...] = ()
    line: int = 0

    def option(self, key, default=None):
        return dict(self.options).get(key, default)


KINDS = ("scalar", "vfield", "form", "bivector", "section")


@dataclass
class SessionModel:
    manifold: Optional[str] = None
    chart: Optional[Chart] = None
    objects: Dict[str, Tuple[str, object]] = field(default_factory=dict)
    structures: Dict[str, StructureDecl] = field(default_factory=dict)
    gpdata: Dict[str, GPData] = field(default_factory=dict)
    polarizations: Dict[str, PolarizationDecl] = field(default_factory=dict)
    foliations: Dict[str, FoliationDecl] = field(default_factory=dict)
    checks: List[CheckRequest] = field(default_factory=list)

    def names(self):
        out = set(self.objects)
        for reg in (self.structures, self.gpdata, self.polarizations, self.foliations):
            out.update(reg)
        if self.manifold:
            out.add(self.manifold)
        return out

    def same_as(self, other: "SessionModel") -> bool:
        """Equality ignoring source line numbers."""
        strip = lambda m: [(c.kind, c.args, c.options) for c in m.checks]  # noqa: E731
        return (self.manifold == other.manifold and self.chart == other.chart
                and self.objects == other.objects and self.structures == other.structures
                and self.gpdata == other.gpdata and self.polarizations == other.polarizations
                and self.foliations == other.foliations and strip(self) == strip(other))


# --- parser ---------------------------------------------------------------------------------
Value = Union[Scalar, VectorField, KForm, KMultivector, BigSection]

_LABELS = {"E", "E'", "P", "P'", "TME", "TME'", "Qframe"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.model = SessionModel()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "ident")

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected a name, found {self.tok.text!r}")
        return self.advance()

    def error(self, msg, cls=DSLSyntaxError, tok=None):
        tok = tok or self.tok
        raise cls(msg, tok.line, tok.col)

    def end_statement(self):
        if self.tok.kind != "nl":
            self.error(f"unexpected {self.tok.text!r} at the end of the statement")
        self.advance()

    # statements
    def parse(self) -> SessionModel:
        while self.tok.kind != "eof":
            if self.tok.kind == "nl":
                self.advance()
                continue
            self.statement()
        return self.model

    def statement(self):
        head = self.expect_ident()
        word = head.text
        if word == "manifold":
            self.manifold(head)
        elif word in KINDS:
            self.declaration(word)
        elif word == "structure":
            self.structure()
        elif word == "gpdata":
            self.gp()
        elif word == "polarization":
            self.polarization()
        elif word == "foliation":
            self.foliation()
        elif word == "check":
            self.check(head)
        else:
            self.error(f"unknown statement {word!r}", tok=head)
        self.end_statement()

    def new_name(self) -> str:
        tok = self.expect_ident()
        if tok.text in RESERVED:
            self.error(f"{tok.text!r} is reserved", ReservedSymbol, tok)
        if tok.text in self.model.names() or (self.model.chart and tok.text in self.model.chart.coords):
            self.error(f"{tok.text!r} is already defined", DuplicateName, tok)
        return tok.text

    def require_chart(self, tok):
        if self.model.chart is None:
            self.error("no manifold declared yet", ChartMismatch, tok)
        return self.model.chart

    def manifold(self, head):
        if self.model.chart is not None:
            self.error("a session has exactly one manifold", ChartMismatch, head)
        name = self.new_name()
        self.expect("dim")
        if self.tok.kind != "num":
            self.error("expected the dimension")
        dim = int(self.advance().text)
        self.expect("coords")
        coords = []
        while self.tok.kind == "ident":
            tok = self.advance()
            if tok.text in RESERVED:
                self.error(f"{tok.text!r} is reserved and cannot be a coordinate", ReservedSymbol, tok)
            if tok.text in coords:
                self.error(f"duplicate coordinate {tok.text!r}", DuplicateName, tok)
            coords.append(tok.text)
        if len(coords) != dim:
            self.error(f"dim {dim} but {len(coords)} coordinates", ChartMismatch, head)
        self.model.manifold = name
        self.model.chart = Chart(tuple(coords))

    def declaration(self, kind):
        start = self.tok
        self.require_chart(start)
        name = self.new_name()
        self.expect("=")
        tok = self.tok
        value = self.coerce(self.expr(), kind, tok)
        self.model.objects[name] = (kind, value)

    def coerce(self, value, kind, tok):
        chart = self.model.chart
        zero = isinstance(value, Scalar) and value.is_zero()
        if kind == "scalar" and isinstance(value, Scalar):
            return value
        if kind == "vfield":
            if isinstance(value, VectorField):
                return value
            if zero:
                return VectorField.zero(chart)
        if kind == "form":
            if isinstance(value, KForm):
                return value
            if isinstance(value, Scalar):
                return KForm.scalar(chart, value)
        if kind == "oneform":
            if isinstance(value, KForm) and value.degree == 1:
                return value
            if zero:
                return KForm.zero(chart, 1)
        if kind == "bivector":
            if isinstance(value, KMultivector) and value.degree == 2:
                return value
            if zero:
                return KMultivector.zero(chart, 2)
        if kind == "section" and isinstance(value, BigSection):
            return value
        self.error(f"expected a {kind}, got {_kind_of(value)}", TypeMismatch, tok)

    def section_list(self) -> List[BigSection]:
        out = []
        if self.at_label() or self.at("}"):
            return out
        while True:
            tok = self.tok
            out.append(self.coerce(self.expr(), "section", tok))
            if self.at(",") or self.at(";"):
                self.advance()
                if self.at_label() or self.at("}"):
                    break
                continue
            break
        return out

    def at_label(self) -> bool:
        t = self.tok
        if t.kind != "ident":
            return False
        if self.peek().text == ":":
            return t.text in _LABELS or t.text == "dimF"
        return self.peek().text == "'" and self.peek(2).text == ":" and t.text + "'" in _LABELS

    def label(self) -> str:
        t = self.expect_ident()
        text = t.text
        if self.at("'"):
            self.advance()
            text += "'"
        self.expect(":")
        return text

    def block(self, allowed) -> Dict[str, object]:
        self.expect("{")
        seen: Dict[str, object] = {}
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("unterminated block")
            if not self.at_label():
                self.error(f"expected one of {sorted(allowed)}, found {self.tok.text!r}")
            tok = self.tok
            lab = self.label()
            if lab not in allowed:
                self.error(f"label {lab!r} is not allowed here", tok=tok)
            if lab in seen:
                self.error(f"label {lab!r} repeated", tok=tok)
            seen[lab] = allowed[lab]()
            if self.at(";"):
                self.advance()
        self.expect("}")
        return seen

    def structure(self):
        self.require_chart(self.tok)
        name = self.new_name()
        parts = self.block({"E": self.section_list, "E'": self.section_list})
        self.model.structures[name] = StructureDecl(parts.get("E", []), parts.get("E'", []))

    def gp(self):
        chart = self.require_chart(self.tok)
        name = self.new_name()
        self.expect("{")
        vals = {}
        kinds = {"varpi": "oneform", "U": "vfield", "nu": "oneform"}
        while not self.at("}"):
            tok = self.expect_ident()
            if tok.text not in kinds:
                self.error(f"expected varpi, U or nu, found {tok.text!r}", tok=tok)
            if tok.text in vals:
                self.error(f"{tok.text!r} repeated", tok=tok)
            self.expect("=")
            etok = self.tok
            vals[tok.text] = self.coerce(self.expr(), kinds[tok.text], etok)
            if self.at(";"):
                self.advance()
        self.expect("}")
        varpi = vals.get("varpi", KForm.zero(chart, 1))
        try:
            G = GPData.of(varpi, vals.get("U"), vals.get("nu"))
        except ValueError as exc:
            self.error(str(exc), TypeMismatch)
        self.model.gpdata[name] = G

    def polarization(self):
        self.require_chart(self.tok)
        name = self.new_name()
        sl = self.section_list
        parts = self.block({"P": sl, "P'": sl, "TME": sl, "TME'": sl})
        self.model.polarizations[name] = PolarizationDecl(parts.get("P", []), parts.get("P'"),
                                                          parts.get("TME", []), parts.get("TME'"))

    def foliation(self):
        chart = self.require_chart(self.tok)
        name = self.new_name()
        self.expect("{")
        self.expect("dimF")
        if self.tok.kind != "num":
            self.error("expected the leaf dimension")
        dimF = int(self.advance().text)
        if self.at(";"):
            self.advance()
        self.expect("Qframe")
        self.expect(":")
        frame = []
        while not self.at("}"):
            tok = self.tok
            frame.append(self.coerce(self.expr(), "vfield", tok))
            if self.at(",") or self.at(";"):
                self.advance()
        self.expect("}")
        if dimF + len(frame) != chart.dim:
            self.error(f"dimF {dimF} plus {len(frame)} frame fields does not give dim {chart.dim}", ChartMismatch)
        self.model.foliations[name] = FoliationDecl(dimF, frame)

    def check(self, head):
        kind = self.dashed()
        args, options = [], []
        refs = set(self.model.structures) | set(self.model.gpdata) | set(self.model.polarizations) \
            | set(self.model.foliations)
        while self.tok.kind != "nl":
            t = self.tok
            if t.kind == "ident" and self.peek().text == "=":
                self.advance()
                self.advance()
                if self.tok.kind not in ("ident", "num"):
                    self.error("option values are names or numbers")
                options.append((t.text, self.dashed()))
                continue
            if t.kind == "ident" and t.text in refs:
                self.advance()
                args.append(Ref(t.text))
                continue
            if self.model.chart is None:
                self.error("no manifold declared yet", ChartMismatch)
            args.append(self.expr())
        self.model.checks.append(CheckRequest(kind, tuple(args), tuple(options), head.line))

    def dashed(self) -> str:
        """``gp-condition``, ``lie-plus``: names joined by dashes without spaces."""
        first = self.advance()
        text = first.text
        while self.at("-") and self.peek().kind in ("ident", "num") and _adjacent(self.tok, self.peek()) \
                and _adjacent(self.toks[self.pos - 1], self.tok):
            self.advance()
            text += "-" + self.advance().text
        return text

    # expressions
    def expr(self) -> Value:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            right = self.term()
            left = self.binary(op, left, right)
        return left

    def term(self) -> Value:
        left = self.wedge()
        while self.at("*") or self.at("/"):
            op = self.advance()
            right = self.wedge()
            left = self.binary(op, left, right)
        return left

    def wedge(self) -> Value:
        left = self.unary()
        while self.at("^"):
            op = self.advance()
            right = self.unary()
            left = self.binary(op, left, right)
        return left

    def unary(self) -> Value:
        if self.at("-"):
            self.advance()
            return -self.unary()
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Value:
        base_tok = self.tok
        base = self.atom()
        if self.at("**"):
            self.advance()
            if self.tok.kind != "num" or "." in self.tok.text:
                self.error("exponents are non-negative integers")
            n = int(self.advance().text)
            if not isinstance(base, Scalar):
                self.error("only scalars have powers", TypeMismatch, base_tok)
            return base ** n
        return base

    def atom(self) -> Value:
        t = self.tok
        chart = self.model.chart
        if t.kind == "num":
            self.advance()
            return Scalar.const(Fraction(t.text))
        if self.at("("):
            self.advance()
            first = self.expr()
            if self.at(","):
                self.advance()
                second = self.expr()
                self.expect(")")
                return self.section(first, second, t)
            self.expect(")")
            return first
        if t.kind != "ident":
            self.error(f"unexpected {t.text or 'end of input'!r}")
        self.advance()
        if t.text in ("D", "d") and self.at("["):
            self.advance()
            ct = self.expect_ident()
            self.expect("]")
            if chart is None or ct.text not in chart.coords:
                self.error(f"{ct.text!r} is not a coordinate of the session chart", ChartMismatch, ct)
            if t.text == "D":
                return VectorField.coordinate(chart, ct.text)
            return KForm.coordinate(chart, ct.text)
        if t.text == "d" and self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            if isinstance(inner, Scalar):
                inner = KForm.scalar(chart, inner)
            if not isinstance(inner, KForm):
                self.error("d() applies to scalars and forms", TypeMismatch, t)
            return d(inner)
        if t.text == "i":
            return I_UNIT
        if t.text == "c":
            return C
        if t.text in ("t", "d", "D"):
            self.error(f"{t.text!r} is reserved", ReservedSymbol, t)
        if chart is not None and t.text in chart.coords:
            return Scalar.var(t.text)
        if t.text in self.model.objects:
            return self.model.objects[t.text][1]
        self.error(f"unknown name {t.text!r}", UnknownName, t)

    def section(self, vf, form, tok) -> BigSection:
        chart = self.model.chart
        if isinstance(vf, Scalar) and vf.is_zero():
            vf = VectorField.zero(chart)
        if isinstance(form, Scalar) and form.is_zero():
            form = KForm.zero(chart, 1)
        if not isinstance(vf, VectorField) or not isinstance(form, KForm) or form.degree != 1:
            self.error("a section is (vector field, 1-form)", TypeMismatch, tok)
        return BigSection(vf, form)

    def binary(self, op: Token, a, b):
        sym = op.text
        try:
            if sym in "+-":
                if isinstance(a, Scalar) and a.is_zero() and not isinstance(b, Scalar):
                    return b if sym == "+" else -b
                if isinstance(b, Scalar) and b.is_zero() and not isinstance(a, Scalar):
                    return a
                self.same_kind(op, a, b)
                return a + b if sym == "+" else a - b
            if sym == "*":
                if isinstance(a, Scalar):
                    return b * a
                if isinstance(b, Scalar):
                    return a * b
                self.error("'*' needs a scalar factor; use '^' for the wedge", TypeMismatch, op)
            if sym == "/":
                if not isinstance(b, Scalar) or not b.is_constant() or b.is_zero():
                    self.error("division is by nonzero constants only", TypeMismatch, op)
                return a * Scalar.const(1 / b.constant_value())
            if sym == "^":
                if isinstance(a, Scalar):
                    return b * a
                if isinstance(b, Scalar):
                    return a * b
                if isinstance(a, VectorField):
                    a = a.as_multivector()
                if isinstance(b, VectorField):
                    b = b.as_multivector()
                if type(a) is not type(b) or isinstance(a, BigSection):
                    self.error(f"cannot wedge {_kind_of(a)} with {_kind_of(b)}", TypeMismatch, op)
                return a ^ b
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DSLError):
                raise
            self.error(str(exc), TypeMismatch, op)
        self.error(f"unknown operator {sym!r}", tok=op)  # pragma: no cover

    def same_kind(self, op, a, b):
        graded = (KForm, KMultivector)
        if type(a) is not type(b) or (isinstance(a, graded) and a.degree != b.degree):
            self.error(f"cannot combine {_kind_of(a)} with {_kind_of(b)}", TypeMismatch, op)


def _adjacent(a: Token, b: Token) -> bool:
    return a.line == b.line and a.col + len(a.text) == b.col


def _kind_of(v) -> str:
    if isinstance(v, Scalar):
        return "scalar"
    if isinstance(v, VectorField):
        return "vector field"
    if isinstance(v, KForm):
        return f"{v.degree}-form"
    if isinstance(v, KMultivector):
        return f"{v.degree}-vector"
    if isinstance(v, BigSection):
        return "section"
    return type(v).__name__


def parse_session(text: str) -> SessionModel:
    return _Parser(text).parse()


# --- printer --------------------------------------------------------------------------------
def _scaled(coef: Scalar, basis: str) -> str:
    if coef == 1:
        return basis
    if coef == -1:
        return "-" + basis
    return f"({coef})*{basis}"


def _join(terms: List[str]) -> str:
    if not terms:
        return "0"
    text = terms[0]
    for t in terms[1:]:
        text += " - " + t[1:] if t.startswith("-") else " + " + t
    return text


def format_value(v) -> str:
    """DSL text for a value; parsing it back gives an equal object."""
    if isinstance(v, Scalar):
        return str(v)
    if isinstance(v, VectorField):
        return _join([_scaled(s, f"D[{n}]") for n, s in v.comps.items()])
    if isinstance(v, KForm):
        if v.degree == 0:
            return str(v[()])
        return _join([_scaled(s, "^".join(f"d[{n}]" for n in key)) for key, s in sorted(
            v.comps.items(), key=lambda kv: v.chart.sort_key(kv[0]))])
    if isinstance(v, KMultivector):
        return _join([_scaled(s, "^".join(f"D[{n}]" for n in key)) for key, s in sorted(
            v.comps.items(), key=lambda kv: v.chart.sort_key(kv[0]))])
    if isinstance(v, BigSection):
        return f"({format_value(v.vf)}, {format_value(v.form)})"
    if isinstance(v, Ref):
        return v.name
    return str(v)


def _sections(lst) -> str:
    return ", ".join(format_value(s) for s in lst)


def print_session(model: SessionModel) -> str:
    lines = []
    if model.chart is not None:
        lines.append(f"manifold {model.manifold} dim {model.chart.dim} coords {' '.join(model.chart.coords)}")
    for name, (kind, v) in model.objects.items():
        lines.append(f"{kind} {name} = {format_value(v)}")
    for name, s in model.structures.items():
        lines.append(f"structure {name} {{\n  E: {_sections(s.gensE)}\n  E': {_sections(s.gensEp)}\n}}")
    for name, G in model.gpdata.items():
        lines.append(f"gpdata {name} {{ varpi = {format_value(G.varpi)} ; U = {format_value(G.U)} ;"
                     f" nu = {format_value(G.nu)} }}")
    for name, P in model.polarizations.items():
        body = [f"  P: {_sections(P.gensP)}"]
        if P.gensPp is not None:
            body.append(f"  P': {_sections(P.gensPp)}")
        body.append(f"  TME: {_sections(P.gensTME)}".rstrip())
        if P.gensTMEp is not None:
            body.append(f"  TME': {_sections(P.gensTMEp)}")
        lines.append(f"polarization {name} {{\n" + "\n".join(body) + "\n}")
    for name, F in model.foliations.items():
        frame = ", ".join(format_value(Z) for Z in F.qframe)
        lines.append(f"foliation {name} {{ dimF {F.dimF} ; Qframe: {frame} }}")
    for req in model.checks:
        parts = ["check", req.kind]
        for a in req.args:
            text = format_value(a)
            parts.append(text if isinstance(a, Ref) else f"({text})")
        parts += [f"{k}={v}" for k, v in req.options]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
