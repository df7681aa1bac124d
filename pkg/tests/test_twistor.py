"""Tests for the 4-metric potential data and its annihilator system."""

import numpy as np
import pytest

from c235 import geometry
from c235.dist import catalog, get_spec
from c235.errors import InvalidParam
from c235.jets import jet_const, jet_var
from c235.twistor import (
    PlebanskiData,
    annihilator_polynomials,
    connection_forms,
    frame_connection_check,
    g2_certificate,
    metric_compatibility_error,
    plebanski_metric,
    twistor_annihilators,
    twistor_coordinate_check,
)


def quadratic_data(x0: float = 0.7, xi: float = 0.3) -> PlebanskiData:
    H = jet_var(x0, 8) ** 2
    return PlebanskiData.from_H(H, point4=(0.2, x0, -0.4, 0.6), xi=xi)


# --- metric and connection --------------------------------------------------


def test_metric_components_are_exact():
    d = quadratic_data()
    g = plebanski_metric(d)
    assert g[0, 1].value == 0.5 and g[1, 0].value == 0.5
    assert g[2, 3].value == 0.5 and g[3, 2].value == 0.5
    assert g[3, 3].value == pytest.approx(d.H.value(), rel=0, abs=0)
    # g_zz depends on x only
    grad = g[3, 3].gradient
    assert grad[1] == pytest.approx(d.H.deriv(1))
    assert grad[0] == grad[2] == grad[3] == 0.0
    zero_slots = [(0, 0), (1, 1), (2, 2), (0, 2), (0, 3), (1, 2), (1, 3)]
    for a, b in zero_slots:
        assert g[a, b].value == 0.0


def test_zero_H_metric_is_flat():
    d = PlebanskiData.from_H(jet_const(0.0, 0.5, 8))
    rep = geometry.curvature(plebanski_metric(d))
    assert rep.maxAbsRicci == 0.0
    assert rep.maxAbsWeyl == 0.0


def test_quadratic_H_is_ricci_flat_with_weyl():
    d = quadratic_data()
    rep = geometry.curvature(plebanski_metric(d))
    assert rep.maxAbsRicci < 1e-13
    assert rep.maxAbsWeyl > 1e-3


def test_metric_compatibility():
    d = quadratic_data()
    assert metric_compatibility_error(plebanski_metric(d)) < 1e-13


def test_connection_forms_display():
    d = quadratic_data()
    forms = connection_forms(d)
    assert set(forms) == {"Gamma^1_1", "Gamma^1_3", "Gamma^3_1", "Gamma^3_3"}
    for name in ("Gamma^1_1", "Gamma^1_3", "Gamma^3_3"):
        assert all(c.value() == 0.0 for c in forms[name])
    row = forms["Gamma^3_1"]
    assert all(c.value() == 0.0 for c in row[:3])
    assert row[3].value() == pytest.approx(-d.theta_x.deriv(3))


def test_frame_connection_oracle():
    for d in (quadratic_data(), PlebanskiData.from_H(jet_var(1.1, 8) ** 3)):
        assert frame_connection_check(d) < 1e-12


# --- annihilators and the coordinate change ---------------------------------


def test_annihilator_polynomials_constant_terms():
    d = quadratic_data()
    A, B = annihilator_polynomials(d)
    assert A[0] == pytest.approx(d.theta_x.deriv(3))
    assert A[1:] == (0.0, 0.0, 0.0)
    assert B[0] == pytest.approx(d.theta_x.deriv(2))
    assert B[1:] == (0.0, 0.0)


def test_twistor_annihilator_rows():
    d = quadratic_data(xi=0.25)
    w3, w4, w5 = twistor_annihilators(d)
    A, B = annihilator_polynomials(d)
    assert w3 == (0.0, 0.0, 0.0, -A[0], 1.0)
    assert w4 == (1.0, 0.0, 0.0, 0.25, 0.0)
    assert w5 == (0.0, -0.25, 1.0, -B[0], 0.0)


def test_coordinate_check_quadratic():
    for xi in (-0.5, 0.0, 0.8):
        d = quadratic_data(xi=xi)
        assert twistor_coordinate_check(d) < 1e-12


def test_coordinate_check_catalog_H():
    for spec in catalog():
        if spec.picture != "H_of_t":
            continue
        lo, hi = spec.domain
        t0 = 0.5 * (lo + hi) if hi < 2 else lo + 0.4
        d = PlebanskiData.from_spec(spec, t0, xi=0.3)
        assert twistor_coordinate_check(d) < 1e-10, spec.id


def test_coordinate_check_alias():
    d = PlebanskiData.from_spec(get_spec("twistor-case-5"), 2.0, xi=-0.2)
    assert twistor_coordinate_check(d) < 1e-10


# --- certificates ------------------------------------------------------------


def test_g2_certificates_over_catalog():
    for spec in catalog():
        lo, hi = spec.domain
        t0 = 0.5 * (lo + hi) if hi < 2 else lo + 0.4
        out = g2_certificate(spec.id, t0)
        assert out["id"] == spec.id
        assert out["route"] == ("direct" if spec.picture == "H_of_t" else "legendre")
        if spec.expect_fail:
            assert out["residual"] > 1e-3, spec.id
        else:
            assert out["residual"] < 1e-8, (spec.id, out["residual"])


# --- guards -------------------------------------------------------------------


def test_from_spec_rejects_non_dual_entries():
    with pytest.raises(InvalidParam):
        PlebanskiData.from_spec("F-power-2", 1.0)


def test_basepoint_mismatch_rejected():
    theta = jet_var(0.5, 8)
    with pytest.raises(InvalidParam):
        PlebanskiData(theta, (0.0, 0.9, 0.0, 0.0), 0.0)
