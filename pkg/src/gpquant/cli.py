"""``gpquant check SESSION``: run the requested checks and print one report per request."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence

from . import bigraded as ap
from . import hamiltonian as hm
from . import polarization as pol
from . import prequantization as pq
from . import qspace
from .calculus import KForm, KMultivector, VectorField, poisson_check
from .dsl import DSLError, Ref, SessionModel, format_value, parse_session, print_session
from .errors import GPQuantError, Indeterminate, NotInBundle, StructureError
from .report import ERROR, FAIL, INDETERMINATE, CheckReport, combine, fail, ok
from .sampling import random_frame_table, random_frame_tuples, random_strunc, random_bigraded
from .scalar import Scalar
from .structures import BigIsoStructure, check_integrable, sample_points, validate_structure
from .truncated import check_complex


class RequestError(Exception):
    """A check request whose arguments do not fit its kind."""


class Context:
    def __init__(self, model: SessionModel, n_points: int = 3, seed: int = 0):
        self.model = model
        self.n_points = n_points
        self.seed = seed
        self._structures: Dict[str, BigIsoStructure] = {}

    def rng(self, req) -> random.Random:
        return random.Random(f"{self.seed}:{req.line}:{req.kind}")

    def structure(self, ref) -> BigIsoStructure:
        name = _ref(ref, self.model.structures, "structure")
        if name not in self._structures:
            decl = self.model.structures[name]
            pts = sample_points(self.model.chart, self.n_points, self.seed)
            self._structures[name] = validate_structure(decl.gensE, decl.gensEp, pts, self.model.chart)
        return self._structures[name]

    def gp(self, ref) -> pq.GPData:
        return self.model.gpdata[_ref(ref, self.model.gpdata, "gpdata")]

    def polarization(self, ref) -> pol.PolarizationSpec:
        decl = self.model.polarizations[_ref(ref, self.model.polarizations, "polarization")]
        Pp = decl.gensPp if decl.gensPp is not None else decl.gensP
        TMp = decl.gensTMEp if decl.gensTMEp is not None else decl.gensTME
        return pol.PolarizationSpec(list(decl.gensP), list(Pp), list(decl.gensTME), list(TMp))

    def foliation(self, ref) -> ap.FoliationChart:
        decl = self.model.foliations[_ref(ref, self.model.foliations, "foliation")]
        return ap.FoliationChart.from_qframe(self.model.chart, decl.dimF, decl.qframe)


def _ref(arg, registry, what) -> str:
    if not isinstance(arg, Ref) or arg.name not in registry:
        raise RequestError(f"expected a {what} name, got {format_value(arg)}")
    return arg.name


def _scalar(arg) -> Scalar:
    if isinstance(arg, Scalar):
        return arg
    if isinstance(arg, KForm) and arg.degree == 0:
        return arg[()]
    raise RequestError(f"expected a scalar, got {format_value(arg)}")


def _args(req, n, at_least=None):
    lo = n if at_least is None else at_least
    if not lo <= len(req.args) <= n:
        want = n if lo == n else f"{lo}-{n}"
        raise RequestError(f"{req.kind} takes {want} arguments, got {len(req.args)}")
    return list(req.args) + [None] * (n - len(req.args))


def _mode(text, default):
    text = text or default
    if text not in (hm.HAM, hm.WHAM):
        raise RequestError(f"mode must be Ham or wHam, got {text!r}")
    return text


# --- the check kinds --------------------------------------------------------------------------
def _check_structure(ctx, req):
    (S,) = _args(req, 1)
    decl = ctx.model.structures[_ref(S, ctx.model.structures, "structure")]
    try:
        st = ctx.structure(S)
    except StructureError as exc:
        return fail("structure", reason=type(exc).__name__, message=str(exc), **(exc.witness or {}))
    return ok("structure", k=st.k, m=st.m, notes=st.notes, generators=len(decl.gensEp))


def _check_integrable(ctx, req):
    (S,) = _args(req, 1)
    return check_integrable(ctx.structure(S))


def _check_gp(ctx, req):
    S, G = _args(req, 2)
    return pq.check_gp_condition(ctx.gp(G), ctx.structure(S))


def _check_commutator(ctx, req):
    S, G, f, h = _args(req, 4)
    st = ctx.structure(S)
    fp = hm.representative_pair(_scalar(f), st, _mode(req.option("fmode"), hm.HAM))
    hp = hm.representative_pair(_scalar(h), st, _mode(req.option("hmode"), hm.WHAM))
    rep = pq.commutator_check(ctx.gp(G), fp, hp)
    if rep.passed:
        rep.details.update(bracket=hm.poisson_bracket(fp, hp))
    return rep


def _check_integrality(ctx, req):
    S, U, Xi = _args(req, 3)
    if not isinstance(U, VectorField):
        U = VectorField.zero(ctx.model.chart) if _scalar(U).is_zero() else None
    if U is None or not isinstance(Xi, KForm):
        raise RequestError("integrality takes a structure, a vector field and a 2-form")
    return pq.check_integrality(ctx.structure(S), U, Xi, req.option("variant", "direct"))


def _check_complex(ctx, req):
    (S,) = _args(req, 1)
    st = ctx.structure(S)
    rng = ctx.rng(req)
    count = int(req.option("samples", 20))
    T = random_frame_table(rng, st, 1)
    tuples = random_frame_tuples(rng, st, 3, count)
    return check_complex(st, T, tuples)


def _check_poisson(ctx, req):
    (P,) = _args(req, 1)
    if not isinstance(P, KMultivector) or P.degree != 2:
        raise RequestError("poisson takes a bivector")
    return ok("poisson") if poisson_check(P) else fail("poisson", jacobiator="nonzero")


def _check_polarization(ctx, req):
    S, P = _args(req, 2)
    return pol.check_polarization(ctx.structure(S), ctx.polarization(P))


def _check_polarized_section(ctx, req):
    G, P, phi = _args(req, 3)
    family = req.option("family", pol.PP_FAMILY)
    return pol.check_polarized_section(ctx.gp(G), ctx.polarization(P), pq.LineSection(_scalar(phi)), family)


def _check_curvature(ctx, req):
    (G,) = _args(req, 1)
    return qspace.check_curvature_relation(qspace.QContext(ctx.gp(G)))


def _check_lift(ctx, req):
    S, G = _args(req, 2)
    return qspace.check_lift_properties(qspace.QContext(ctx.gp(G)), ctx.structure(S))


def _check_relations(ctx, req):
    (F,) = _args(req, 1)
    fol = ctx.foliation(F)
    rng = ctx.rng(req)
    count = int(req.option("samples", 10))
    m = fol.chart.dim
    forms = [random_bigraded(rng, fol, rng.randint(0, m)) for _ in range(count)]
    trunc = [random_strunc(rng, fol, rng.randint(0, m), rng.randint(0, m)) for _ in range(count)]
    return combine("relations", [ap.check_relations(forms), ap.check_ds_squared(trunc),
                                 ap.check_ds_formula(trunc)])


def _check_poincare(ctx, req):
    (F,) = _args(req, 1)
    fol = ctx.foliation(F)
    rng = ctx.rng(req)
    m = fol.chart.dim
    for n in range(int(req.option("samples", 5))):
        s = rng.randint(0, m - 1)
        k = rng.randint(s + 1, m)
        lam = ap.d_s(random_strunc(rng, fol, s, k - 1))
        mu = ap.poincare_solve_ds(lam)["mu"]
        if ap.d_s(mu) != lam:
            return fail("poincare", sample=n, s=s, k=k)
    return ok("poincare")


def _check_hamiltonian(ctx, req):
    S, f = _args(req, 2)
    st = ctx.structure(S)
    mode = _mode(req.option("mode"), hm.HAM)
    X, amb = hm.hamiltonian_representative(_scalar(f), st, mode)
    hm.verify_hamiltonian(_scalar(f), X, st, mode)
    return ok("hamiltonian", field=X, ambiguity=amb)


def _check_leibniz(ctx, req):
    S, l_, f, h = _args(req, 4)
    st = ctx.structure(S)
    mode = _mode(req.option("mode"), hm.HAM)
    pairs = [hm.representative_pair(_scalar(x), st, mode) for x in (l_, f, h)]
    return hm.check_leibniz(*pairs)


def _check_restriction(ctx, req):
    S, G, P, h, phi = _args(req, 5)
    st = ctx.structure(S)
    hp = hm.representative_pair(_scalar(h), st, _mode(req.option("mode"), hm.HAM))
    return pol.check_operator_restriction(ctx.gp(G), st, ctx.polarization(P), hp,
                                          pq.LineSection(_scalar(phi)))


CHECKS: Dict[str, Callable] = {
    "structure": _check_structure,
    "integrable": _check_integrable,
    "gp-condition": _check_gp,
    "commutator": _check_commutator,
    "integrality": _check_integrality,
    "complex": _check_complex,
    "poisson": _check_poisson,
    "polarization": _check_polarization,
    "polarized-section": _check_polarized_section,
    "curvature": _check_curvature,
    "lift": _check_lift,
    "relations": _check_relations,
    "poincare": _check_poincare,
    "hamiltonian": _check_hamiltonian,
    "leibniz": _check_leibniz,
    "restriction": _check_restriction,
}


def run_one(ctx: Context, req) -> CheckReport:
    fn = CHECKS.get(req.kind)
    if fn is None:
        return CheckReport(req.kind, ERROR, {"error": f"unknown check kind {req.kind!r}"})
    try:
        rep = fn(ctx, req)
    except Indeterminate as exc:
        return CheckReport(req.kind, INDETERMINATE, {"locus": exc.locus, "message": str(exc)})
    except NotInBundle as exc:
        return CheckReport(req.kind, FAIL, dict(exc.witness or {}, message=str(exc)))
    except (GPQuantError, RequestError, ValueError, TypeError) as exc:
        return CheckReport(req.kind, ERROR, {"error": f"{type(exc).__name__}: {exc}"})
    return CheckReport(req.kind, rep.status, rep.witness, rep.details)


def run_checks(model: SessionModel, only: Optional[str] = None, n_points: int = 3, seed: int = 0,
               timing: bool = False) -> List[CheckReport]:
    ctx = Context(model, n_points, seed)
    out = []
    for req in model.checks:
        if only is not None and req.kind != only:
            continue
        start = time.perf_counter()
        rep = run_one(ctx, req)
        if timing:
            rep.millis = round((time.perf_counter() - start) * 1000, 3)
        out.append(rep)
    return out


def exit_code(reports: Sequence[CheckReport]) -> int:
    statuses = {r.status for r in reports}
    if statuses & {INDETERMINATE, ERROR}:
        return 2
    if FAIL in statuses:
        return 1
    return 0


def _render(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_render(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_render(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "none"
    try:
        return format_value(v)
    except Exception:  # pragma: no cover - format_value falls back to str
        return str(v)


def rendered_witness(rep: CheckReport):
    if rep.witness is None:
        return None
    return {str(k): _render(v) for k, v in rep.witness.items()}


def emit_report(reports: Sequence[CheckReport], fmt: str = "text") -> str:
    if fmt == "json":
        return "".join(json.dumps({"check": r.check, "status": r.status, "witness": rendered_witness(r),
                                   "millis": r.millis}, sort_keys=False) + "\n" for r in reports)
    rows = [("check", "status", "witness")]
    for r in reports:
        w = rendered_witness(r)
        rows.append((r.check, r.status, "" if w is None else "; ".join(f"{k}={v}" for k, v in w.items())))
    wc = max(len(r[0]) for r in rows)
    ws = max(len(r[1]) for r in rows)
    return "".join(f"{a:<{wc}}  {b:<{ws}}  {c}".rstrip() + "\n" for a, b, c in rows)


def build_parser() -> argparse.ArgumentParser:
    ap_ = argparse.ArgumentParser(prog="gpquant", description="Exact checks for generalized geometry sessions.")
    sub = ap_.add_subparsers(dest="command", required=True)
    chk = sub.add_parser("check", help="run the check requests of a session file")
    chk.add_argument("session")
    chk.add_argument("--format", choices=("text", "json"), default="text")
    chk.add_argument("--only", metavar="CHECK")
    chk.add_argument("--sample-points", type=int, default=3, metavar="N")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--timing", action="store_true", help="report wall-clock milliseconds per check")
    fmt = sub.add_parser("format", help="print a session in normal form")
    fmt.add_argument("session")
    return ap_


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.session, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"gpquant: {exc}", file=sys.stderr)
        return 2
    try:
        model = parse_session(text)
    except DSLError as exc:
        print(f"{args.session}:{exc.line}:{exc.col}: {type(exc).__name__}: {exc.message}", file=sys.stderr)
        return 2
    if args.command == "format":
        sys.stdout.write(print_session(model))
        return 0
    reports = run_checks(model, args.only, args.sample_points, args.seed, args.timing)
    sys.stdout.write(emit_report(reports, args.format))
    return exit_code(reports)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
