from __future__ import annotations

import random

import pytest

import families as fam
from gpquant.big_tangent import courant_bracket
from gpquant.calculus import exterior_derivative as d
from gpquant.errors import DegreeMismatch
from gpquant.sampling import random_combination, random_form, random_frame_table, random_frame_tuples
from gpquant.truncated import (FormBacked, FrameTable, OmegaE, PairBacked, check_complex, d_tr,
                               d_tr_eval, j_map)


@pytest.fixture(scope="module", params=["plane", "mechanics"])
def structure(request):
    return fam.plane_rank_one() if request.param == "plane" else fam.mechanics()[0]


def _tuples(rng, S, length, count=4):
    return random_frame_tuples(rng, S, length, count)


def test_degree_one_formula(structure):
    rng = random.Random(1)
    T = random_frame_table(rng, structure, 1)
    for X, Y in _tuples(rng, structure, 2):
        want = X.vf(T(Y)) - Y.vf(T(X)) - T(courant_bracket(X, Y))
        assert d_tr_eval(structure, T, [X], Y) == want


def test_d_squared_degree_two(structure):
    rng = random.Random(2)
    tuples = _tuples(rng, structure, 4, 3)
    for T in (j_map(random_form(rng, structure.chart, 2, degree=2)), OmegaE(),
              d_tr(structure, random_frame_table(rng, structure))):
        assert check_complex(structure, T, tuples).passed


def test_alternation_condition_matters():
    # a degree-2 table that is not alternating on E x E is not a truncated cochain
    S = fam.plane_rank_one()
    T = FrameTable(S, 2, {(0, 0): fam.q, (0, 1): 1, (0, 2): fam.p})
    e = S.gensE[0]
    assert not T(e, e).is_zero()
    with pytest.raises(ValueError):
        random_frame_table(random.Random(0), S, 2)


def test_omega_is_a_cocycle(structure):
    rng = random.Random(3)
    dw = d_tr(structure, OmegaE())
    for args in _tuples(rng, structure, 3):
        assert dw(*args).is_zero()


def test_j_is_a_chain_map(structure):
    rng = random.Random(4)
    lam = random_form(rng, structure.chart, 1, degree=2)
    dj = d_tr(structure, j_map(lam))
    jd = FormBacked(d(lam))
    for args in _tuples(rng, structure, 2):
        assert dj(*args) == jd(*args)


def test_arity_is_checked():
    S = fam.plane_rank_one()
    with pytest.raises(DegreeMismatch):
        OmegaE()(S.gensE[0])


def test_theta_cochain_values():
    S = fam.plane_rank_one()
    th = PairBacked(fam.D(fam.PLANE, "q"), fam.dx(fam.PLANE, "p"))
    y = random_combination(random.Random(5), S.gensEp)
    assert th(y) == y.vf.component("p") + y.form.component("q")
