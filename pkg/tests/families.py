"""Builders for the structures the tests keep coming back to."""
from __future__ import annotations

from gpquant.bigraded import FoliationChart
from gpquant.big_tangent import BigSection
from gpquant.calculus import Chart, KForm, VectorField
from gpquant.polarization import PolarizationSpec
from gpquant.prequantization import GPData
from gpquant.scalar import Scalar
from gpquant.structures import build_graph_two_form, constrained_mechanics, validate_structure

PLANE = Chart(("q", "p"))
R3 = Chart(("x", "y", "z"))
q, p = Scalar.var("q"), Scalar.var("p")
x, y, z = Scalar.var("x"), Scalar.var("y"), Scalar.var("z")


def D(chart, name):
    return VectorField.coordinate(chart, name)


def dx(chart, name):
    return KForm.coordinate(chart, name)


def plane_lambda() -> KForm:
    return dx(PLANE, "q").wedge(dx(PLANE, "p"))


def plane_rank_one():
    """E_(dq^dp, span{D[p]}): rank one, integrable."""
    return build_graph_two_form(plane_lambda(), [D(PLANE, "p")], [dx(PLANE, "q")])


def plane_dirac():
    """Graph of dq^dp over all of TM."""
    return build_graph_two_form(plane_lambda(), [D(PLANE, "q"), D(PLANE, "p")], [])


def plane_gp() -> GPData:
    return GPData.of(dx(PLANE, "q") * (-p))


def r3_nonfoliation():
    """E_(0, span{D[x], D[y] + x D[z]}); the distribution is not involutive."""
    gens = [D(R3, "x"), D(R3, "y") + D(R3, "z") * x]
    ann = [dx(R3, "y") * x - dx(R3, "z")]
    return build_graph_two_form(KForm.zero(R3, 2), gens, ann)


def mechanics():
    """T*R^2 with the constraint q1 dq1 + dq2 = 0."""
    S, P, sigma, ann = constrained_mechanics(2, [[Scalar.var("q1"), 1]])
    ch = S.chart
    varpi = dx(ch, "q1") * Scalar.var("p1") + dx(ch, "q2") * Scalar.var("p2")
    return S, GPData.of(varpi), P, sigma


def free_mechanics(n: int = 2):
    """No constraints: the standard cotangent setting."""
    S, P, sigma, ann = constrained_mechanics(n, [])
    ch = S.chart
    varpi = KForm.zero(ch, 1)
    for i in range(1, n + 1):
        varpi = varpi + dx(ch, f"q{i}") * Scalar.var(f"p{i}")
    return S, GPData.of(varpi)


QPU = Chart(("q", "p", "u"))


def coordinate_polarization():
    """Presymplectic slice of R^3 with the polarization spanned by D[p]."""
    sec = lambda v, f: BigSection(v, f)  # noqa: E731
    Dq, Dp, Du = (D(QPU, n) for n in QPU.coords)
    dq, dp, du = (dx(QPU, n) for n in QPU.coords)
    zv, zf = VectorField.zero(QPU), KForm.zero(QPU, 1)
    E = [sec(Dq, dp), sec(Dp, -dq)]
    Ep = E + [sec(Du, zf), sec(zv, du)]
    S = validate_structure(E, Ep)
    G = GPData.of(dq * (-Scalar.var("p")))
    P = PolarizationSpec([sec(Dp, -dq)], [sec(Dp, -dq), sec(Du, zf), sec(zv, du)],
                         [], [sec(Du, zf)])
    return S, G, P


def twisted_foliation() -> FoliationChart:
    """Leaves are the z-lines; the Q-frame {D[x] + y D[z], D[y]} is not involutive."""
    return FoliationChart.from_qframe(R3, 1, [D(R3, "x") + D(R3, "z") * y, D(R3, "y")])


def flat_foliation() -> FoliationChart:
    return FoliationChart.from_qframe(R3, 1, [D(R3, "x"), D(R3, "y")])
