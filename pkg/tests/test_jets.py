import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from c235.errors import DivisionByZeroJet
from c235.jets import (
    MJet2,
    Jet1,
    derivative_oracle,
    jet_abs_pow,
    jet_compose,
    jet_const,
    jet_exp,
    jet_invert,
    jet_log,
    jet_pow,
    jet_sqrt,
    jet_var,
)

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
coeff_lists = st.lists(finite, min_size=1, max_size=9)


def _jet(basepoint, coeffs):
    return Jet1(basepoint, coeffs)


@given(finite, coeff_lists, coeff_lists)
def test_product_rule(x0, ca, cb):
    n = min(len(ca), len(cb))
    a, b = _jet(x0, ca[:n]), _jet(x0, cb[:n])
    lhs = (a * b).derivative()
    rhs = a.derivative() * b.truncate(n - 1) + a.truncate(n - 1) * b.derivative()
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9 * (1 + np.max(np.abs(lhs.coeffs))))


@given(finite, coeff_lists)
def test_add_sub_roundtrip(x0, ca):
    a = _jet(x0, ca)
    z = a - a
    assert np.allclose(z.coeffs, 0.0)


@given(finite, coeff_lists)
def test_div_mul_roundtrip(x0, ca):
    if abs(ca[0]) < 1e-3:
        ca[0] = 1.0 + abs(ca[0])
    a = _jet(x0, ca)
    one = a / a
    assert abs(one.value() - 1.0) < 1e-9
    assert np.allclose(one.coeffs[1:], 0.0, atol=1e-6 * (1 + np.max(np.abs(ca))))


@given(st.floats(min_value=-1.5, max_value=1.5), coeff_lists)
def test_exp_log_roundtrip(x0, ca):
    ca = list(ca)
    ca[0] = min(ca[0], 1.5)
    a = _jet(x0, ca)
    back = jet_log(jet_exp(a))
    assert np.allclose(back.coeffs, a.coeffs, atol=1e-7 * (1 + np.max(np.abs(a.coeffs))))


def test_exp_derivative_is_self():
    f = jet_exp(jet_var(0.3, 8))
    assert np.allclose(f.derivative().coeffs, f.truncate(7).coeffs)


def test_compose_invert_roundtrip():
    f = jet_var(0.4, 8) + 0.5 * jet_var(0.4, 8) ** 2
    finv = jet_invert(f)
    ident = jet_compose(finv, f)
    expected = jet_var(0.4, 8)
    assert np.allclose(ident.coeffs, expected.coeffs, atol=1e-10)


def test_division_by_zero_jet_raises():
    with pytest.raises(DivisionByZeroJet):
        jet_var(0.0, 4).__rtruediv__(1.0)


ORACLE_FUNCS = [
    (lambda x: math.exp(x), lambda j: jet_exp(j), 0.3),
    (lambda x: math.log(x), lambda j: jet_log(j), 1.7),
    (lambda x: math.sqrt(x), lambda j: jet_sqrt(j), 2.1),
    (lambda x: x ** 2.5, lambda j: jet_pow(j, 2.5), 1.4),
    (lambda x: 1.0 / (1.0 + x * x), lambda j: 1.0 / (1.0 + j * j), 0.6),
    (lambda x: x ** 3 - 2 * x, lambda j: j ** 3 - 2.0 * j, -0.8),
    (lambda x: math.exp(-x * x), lambda j: jet_exp(-(j * j)), 0.4),
    (lambda x: abs(x) ** (1.0 / 3.0), lambda j: jet_abs_pow(j, 1.0 / 3.0), 1.9),
    (lambda x: math.exp(x) / (2.0 + x), lambda j: jet_exp(j) / (2.0 + j), 0.2),
    (lambda x: math.log(1.0 + x * x), lambda j: jet_log(1.0 + j * j), 1.1),
]


@pytest.mark.parametrize("idx", range(len(ORACLE_FUNCS)))
def test_jet_matches_finite_difference_oracle(idx):
    f, jf, x0 = ORACLE_FUNCS[idx]
    jet = jf(jet_var(x0, 8))
    for k in range(1, 7):
        est = derivative_oracle(f, x0, k)
        exact = jet.deriv(k)
        assert abs(est - exact) / max(abs(exact), 1.0) < 1e-5


def test_antiderivative_inverts_derivative():
    f = jet_exp(jet_var(0.5, 7))
    g = f.derivative().antiderivative(f.value())
    assert np.allclose(g.coeffs, f.coeffs)


def test_mjet2_product_rule():
    rng = np.random.default_rng(0)
    for _ in range(20):
        va, vb = rng.normal(size=2)
        ga, gb = rng.normal(size=(2, 3))
        ha, hb = rng.normal(size=(2, 3, 3))
        ha, hb = ha + ha.T, hb + hb.T
        a, b = MJet2(va, ga, ha), MJet2(vb, gb, hb)
        p = a * b
        assert np.allclose(p.gradient, va * gb + vb * ga)
        assert np.allclose(
            p.hessian, va * hb + vb * ha + np.outer(ga, gb) + np.outer(gb, ga)
        )
        r = a.reciprocal() if abs(va) > 1e-6 else None
        if r is not None:
            ident = a * r
            assert abs(ident.value - 1.0) < 1e-9
            assert np.allclose(ident.gradient, 0.0, atol=1e-8)
            assert np.allclose(ident.hessian, 0.0, atol=1e-7)


def test_mjet2_from_jet1_embedding():
    j = jet_exp(jet_var(0.3, 4))
    m = MJet2.from_jet1(j, 2, 5)
    assert m.value == j.value()
    assert m.gradient[2] == j.deriv(1)
    assert m.hessian[2, 2] == pytest.approx(j.deriv(2))
    assert np.count_nonzero(m.gradient) == 1


def test_jet_pow_negative_base_odd_denominator():
    j = jet_var(-2.0, 5)
    from fractions import Fraction

    cube = jet_pow(j, Fraction(1, 3))
    assert cube.value() == pytest.approx(-(2.0 ** (1.0 / 3.0)))


def test_jet_const_and_call():
    c = jet_const(2.5, 1.0, 4)
    assert c.value() == 2.5
    f = jet_var(1.0, 6) ** 2
    assert f(1.3) == pytest.approx(1.3 ** 2)
