"""Seeded random instances: polynomials, frame combinations, cochains and bigraded forms."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import List, Sequence

from .bigraded import BigradedForm, FoliationChart, STruncForm, decompose
from .big_tangent import BigSection
from .calculus import Chart, KForm, VectorField
from .scalar import Scalar
from .structures import BigIsoStructure
from .truncated import FrameTable


def random_scalar(rng: random.Random, names: Sequence[str], terms: int = 2, degree: int = 2,
                  coef: int = 3) -> Scalar:
    out = Scalar.const(0)
    for _ in range(terms):
        m = Scalar.const(Fraction(rng.randint(-coef, coef), rng.randint(1, 2)))
        for _ in range(rng.randint(0, degree)):
            m = m * Scalar.var(rng.choice(list(names)))
        out = out + m
    return out


def random_vector_field(rng: random.Random, chart: Chart, **kw) -> VectorField:
    return VectorField(chart, {n: random_scalar(rng, chart.coords, **kw) for n in chart.coords})


def random_form(rng: random.Random, chart: Chart, k: int, **kw) -> KForm:
    return KForm(chart, k, {key: random_scalar(rng, chart.coords, **kw)
                            for key in combinations(chart.coords, k)})


def random_combination(rng: random.Random, gens: Sequence[BigSection], degree: int = 1) -> BigSection:
    chart = gens[0].chart
    out = BigSection.zero(chart)
    for g in gens:
        out = out + g * random_scalar(rng, chart.coords, terms=1, degree=degree)
    return out


def random_frame_table(rng: random.Random, S: BigIsoStructure, degree: int = 1) -> FrameTable:
    """Random 1-cochain on the E' frame.

    Higher degrees are refused: a random table would ignore the alternation
    required when the last argument also lies in E.
    """
    if degree != 1:
        raise ValueError("random frame tables are only generated in degree 1")
    values = {}
    for head in combinations(range(S.k), degree - 1):
        for a in range(len(S.gensEp)):
            values[head + (a,)] = random_scalar(rng, S.chart.coords, terms=2, degree=1)
    return FrameTable(S, degree, values)


def random_frame_tuples(rng: random.Random, S: BigIsoStructure, length: int, count: int,
                        degree: int = 1) -> List[list]:
    """``length - 1`` sections of E and one of E', each a random polynomial combination."""
    return [[random_combination(rng, S.gensE, degree) for _ in range(length - 1)]
            + [random_combination(rng, S.gensEp, degree)] for _ in range(count)]


def random_bigraded(rng: random.Random, fol: FoliationChart, k: int, **kw) -> BigradedForm:
    return decompose(fol, random_form(rng, fol.chart, k, **kw))


def random_strunc(rng: random.Random, fol: FoliationChart, s: int, k: int, **kw) -> STruncForm:
    return STruncForm.truncate(s, random_bigraded(rng, fol, k, **kw))
