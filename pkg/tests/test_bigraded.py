from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import families as fam
from gpquant import bigraded as ap
from gpquant.calculus import KForm
from gpquant.errors import NotClosed
from gpquant.sampling import random_bigraded, random_strunc

x, y, z = fam.x, fam.y, fam.z


@pytest.fixture(scope="module")
def twisted():
    return fam.twisted_foliation()


def _k(deg, comps):
    return KForm(fam.R3, deg, comps)


def test_types_in_flat_chart():
    fol = fam.flat_foliation()
    w = ap.decompose(fol, _k(2, {("x", "y"): 1}))
    assert w.types() == [(2, 0)]
    w = ap.decompose(fol, _k(2, {("x", "z"): 1}))
    assert w.types() == [(1, 1)]


def test_ddouble_of_function():
    fol = fam.flat_foliation()
    f = ap.decompose(fol, KForm.scalar(fam.R3, x * z))
    assert ap.d_double(f).to_kform() == _k(1, {("z",): x})


def test_partial_of_theta(twisted):
    # theta^z = dz - y dx, and partial theta^z is the curvature of the Q-frame
    theta = ap.decompose(twisted, _k(1, {("z",): 1, ("x",): -y}))
    assert theta.types() == [(0, 1)]
    assert ap.d_partial(theta).to_kform() == _k(2, {("x", "y"): 1})


def test_frame_roundtrip(twisted):
    rng = random.Random(0)
    for k in range(4):
        w = random_bigraded(rng, twisted, k)
        assert ap.decompose(twisted, w.to_kform()) == w


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 3), st.integers(0, 10 ** 6))
def test_relations_property(k, seed):
    w = random_bigraded(random.Random(seed), fam.twisted_foliation(), k)
    assert ap.check_relations([w]).passed


def test_truncation_checks(twisted):
    rng = random.Random(1)
    samples = [random_strunc(rng, twisted, s, k) for s in range(3) for k in range(4)]
    assert ap.check_ds_squared(samples).passed
    assert ap.check_ds_formula(samples).passed
    assert ap.check_chain_map(samples, 0).passed
    with pytest.raises(ValueError):
        ap.restrict_truncation(samples[0], 5)


def test_component_rules(twisted):
    w = random_bigraded(random.Random(2), twisted, 2)
    assert w.component(-1, 3).is_zero()
    with pytest.raises(ValueError):
        w.component(1, 0)
    with pytest.raises(ValueError):
        ap.STruncForm(0, ap.decompose(twisted, _k(2, {("x", "y"): 1})))


def test_ddouble_solver(twisted):
    lam = ap.decompose(fam.flat_foliation(), _k(1, {("z",): x}))
    mu = ap.poincare_solve_ddouble(lam)
    assert mu.to_kform() == KForm.scalar(fam.R3, x * z)
    with pytest.raises(NotClosed):
        ap.poincare_solve_ds(ap.STruncForm(1, ap.decompose(twisted, _k(1, {("z",): z * x}))
                                           + ap.decompose(twisted, _k(1, {("x",): y}))))


def test_k_equals_s_example():
    fol = fam.flat_foliation()
    lam = ap.STruncForm(1, ap.decompose(fol, _k(1, {("x",): 1})))
    out = ap.poincare_solve_ds(lam)
    assert out["mu"].is_zero()
    assert out["nu"].to_kform() == _k(1, {("x",): 1})


def test_k_less_than_s_rejected(twisted):
    lam = ap.STruncForm(2, ap.decompose(twisted, _k(1, {("x",): 1})))
    with pytest.raises(ValueError):
        ap.poincare_solve_ds(lam)


def test_qframe_needs_unit_heads():
    with pytest.raises(ValueError):
        ap.FoliationChart.from_qframe(fam.R3, 1, [fam.D(fam.R3, "x") * 2, fam.D(fam.R3, "y")])
