from fractions import Fraction

import numpy as np
import pytest

from c235.jets import Jet1, jet_abs_pow, jet_var
from c235.specialfn import (
    CLOSED_FORM_FAMILIES,
    CLOSED_FORM_HYPER,
    CLOSED_FORM_TRIPLES,
    ClosedFormId,
    HyperTriple,
    TRANSFORM_KINDS,
    closed_form_ode_residual,
    closed_form_solution,
    hyp2f1_jet,
    hypergeom_pair,
    hypergeom_residual,
    schwarz_potential,
    transform_identity_check,
    u_ode_residual,
    wronskian_check,
)

S_POINTS = [0.11, 0.23, 0.37, 0.52, 0.68, 0.81]


# --- series engine -------------------------------------------------------


@pytest.mark.parametrize("s0", S_POINTS)
def test_displayed_truncations_match_exactly(s0):
    cases = [
        (HyperTriple(-4, -1, -2), lambda s: 1.0 - 2.0 * s),
        (
            HyperTriple(Fraction(-4, 3), Fraction(5, 3), Fraction(2, 3)),
            lambda s: (3 * s * s - 4 * s + 1) * (1 - s) ** (-2.0 / 3.0),
        ),
        (HyperTriple(Fraction(-4, 3), -1, -2), lambda s: 1.0 - 2.0 * s / 3.0),
        (HyperTriple(Fraction(-4, 3), -1, Fraction(2, 3)), lambda s: 1.0 + 2.0 * s),
    ]
    for triple, closed in cases:
        got = hyp2f1_jet(triple, s0, 4).value()
        assert got == pytest.approx(closed(s0), rel=1e-13, abs=1e-13)


def test_quartic_truncation_polynomial():
    # the degree-4 terminating series (a = -4) written out
    s0 = 0.42
    jet = hyp2f1_jet(HyperTriple(-4, 2, Fraction(-1, 2)), s0, 6)
    s = s0
    expected = -128 * s**4 + 256 * s**3 - 144 * s * s + 16 * s + 1
    assert jet.value() == pytest.approx(expected, rel=1e-13)
    # degree 4 polynomial: 5th and 6th coefficients vanish
    assert jet.coeffs[5] == pytest.approx(0.0, abs=1e-10)
    assert jet.coeffs[6] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("s0", S_POINTS)
def test_hyp2f1_jet_satisfies_its_ode(s0):
    for triple in CLOSED_FORM_HYPER.values():
        z = hyp2f1_jet(triple, s0, 6)
        assert hypergeom_residual(z, triple) < 1e-12
        # the full jet, not just the value: residual at the shifted point
        z_shift = Jet1(s0, z.coeffs[:5])
        assert hypergeom_residual(z_shift, triple) < 1e-12


def test_hyp2f1_against_scipy():
    from scipy.special import hyp2f1 as scipy_hyp2f1

    for s0 in S_POINTS:
        for triple in CLOSED_FORM_HYPER.values():
            a, b, c = (float(x) for x in triple)
            ours = hyp2f1_jet(triple, s0, 2).value()
            ref = float(scipy_hyp2f1(a, b, c, s0))
            assert ours == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_second_solution_of_pair():
    p = HyperTriple(Fraction(-1, 4), Fraction(5, 12), Fraction(1, 2))
    for s0 in (0.2, 0.6):
        z1, z2 = hypergeom_pair(p, s0)
        assert hypergeom_residual(z1, p) < 1e-12
        assert hypergeom_residual(z2, p) < 1e-12
        # z2 = s^(1-c) 2F1(a-c+1, b-c+1; 2-c; s)
        shifted = HyperTriple(p.a - p.c + 1, p.b - p.c + 1, 2 - p.c)
        pref = s0 ** float(1 - p.c)
        assert z2.value() == pytest.approx(
            pref * hyp2f1_jet(shifted, s0, 2).value(), rel=1e-12
        )


# --- closed forms --------------------------------------------------------


@pytest.mark.parametrize("family", CLOSED_FORM_FAMILIES)
@pytest.mark.parametrize("s0", [0.15, 0.45, 0.85])
def test_closed_forms_satisfy_their_ode(family, s0):
    if family == "elementary_r":
        s0 = 1.0 + s0  # r-domain
    cid = ClosedFormId(family)
    assert closed_form_ode_residual(cid, s0) < 1e-10


@pytest.mark.parametrize("family", sorted(CLOSED_FORM_TRIPLES))
def test_second_order_potential_form(family):
    # u'' + V u / 4 = 0 with the weighted potential of the entry's triple
    tr = tuple(float(x) for x in CLOSED_FORM_TRIPLES[family])
    z1, z2 = closed_form_solution(ClosedFormId(family), 0.3, 8)
    for u in (z1, z2):
        assert u_ode_residual(u, tr) < 1e-10


def test_basis_mixing_constants():
    cid = ClosedFormId("table1_row1", (2.0, -1.0, 0.5, 3.0))
    z1, z2 = closed_form_solution(cid, 0.4, 6)
    e1, e2 = closed_form_solution(ClosedFormId("table1_row1"), 0.4, 6)
    mixed1 = 2.0 * e1 + (-1.0) * e2
    mixed2 = 0.5 * e1 + 3.0 * e2
    assert np.allclose(z1.coeffs, mixed1.coeffs)
    assert np.allclose(z2.coeffs, mixed2.coeffs)


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        ClosedFormId("table9_row9")


def test_schwarz_potential_pole_structure():
    # V has double poles at s = 0 and s = 1; residue data fixes the triple
    s = jet_var(0.5, 6)
    V = schwarz_potential(3.0, 3.0, 3.0, s)
    assert np.all(np.isfinite(V.coeffs))
    perturbed = u_ode_residual(jet_var(0.5, 6) ** 2, (3.0, 3.0, 3.0))
    assert perturbed > 1e-3


# --- Wronskian law -------------------------------------------------------


@pytest.mark.parametrize("family", ["table1_row1", "dual_k32_row1", "dual_k32_row3"])
def test_wronskian_law(family):
    p = CLOSED_FORM_HYPER[family]
    pair = lambda s: hypergeom_pair(p, s)
    for s0 in (0.2, 0.35, 0.65, 0.8):
        assert wronskian_check(pair, p, 0.5, s0) < 1e-9


# --- transformation identities -------------------------------------------

IDENTITY_POINTS = [0.09, 0.16, 0.22, 0.31, 0.38, 0.44, 0.57, 0.66, 0.74, 0.88]


@pytest.mark.parametrize("kind", TRANSFORM_KINDS)
def test_transformation_identities(kind):
    for s0 in IDENTITY_POINTS:
        if kind == "quadratic" and s0 >= 0.5:
            # the identity's argument 4s(1-s) is symmetric under
            # s <-> 1-s; the function identity holds on the s < 1/2 branch
            s0 = s0 - 0.5
        assert transform_identity_check(kind, s0) < 1e-10, (kind, s0)


def test_quadratic_identity_branch():
    # beyond the branch point the two sides genuinely differ
    assert transform_identity_check("quadratic", 0.8) > 1e-3


def test_unknown_transform_kind():
    with pytest.raises(ValueError):
        transform_identity_check("nope", 0.3)
