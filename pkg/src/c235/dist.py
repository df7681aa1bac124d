"""Solution catalog and the Legendre duality between the two pictures.

Each catalog entry names one family of flat solutions, carries the data
needed to build its F(q) (or H(t)) jet, and records the admissible domain
of its construction parameter. Integration constants follow one gauge:
every jet antiderivative vanishes at the basepoint. The sixth-order
equations depend only on second and higher derivatives and are degree-4
homogeneous, so this gauge choice never affects a residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

import numpy as np

from .errors import BranchError, DegenerateError, DomainError, UnknownCaseId
from .jets import (
    Jet1,
    jet_abs_pow,
    jet_compose,
    jet_const,
    jet_invert,
    jet_pow,
    jet_sqrt,
    jet_var,
)
from .chazy import SchwarzTriple, build_F_from_I, schwarz_solution, two_pole_solution
from .specialfn import ClosedFormId, HyperTriple, closed_form_solution, hypergeom_pair

Frac = Fraction


@dataclass(frozen=True)
class SolutionSpec:
    """One catalog entry.

    param_name is the variable the builder takes a basepoint in (q, t, x,
    s or r); domain is the open interval of admissible basepoints, already
    shrunk away from singular endpoints.
    """

    id: str
    picture: str  # "F_of_q" | "H_of_t"
    family: str  # power_m | two_pole | hyper_triple | schwarz_triple_param | ds_curve | elementary_r
    params: dict
    param_name: str
    domain: Tuple[float, float]
    note: str = ""
    expect_fail: bool = False
    aliases: Tuple[str, ...] = ()


def _fmt(x: Fraction) -> str:
    return str(x)


def _triple_id(prefix: str, abc) -> str:
    return f"{prefix}-({','.join(_fmt(Fraction(v)) for v in abc)})"


F_SCHWARZ_CLASSES = {
    # (alpha, beta, gamma) -> exponent pair (e1, e2) in F'' = sdot^{3/2} / (s^{e1} (s-1)^{e2})
    (Frac(3), Frac(3), Frac(3)): (Frac(1), Frac(1)),
    (Frac(3), Frac(1, 3), Frac(1, 3)): (Frac(1), Frac(1)),
    (Frac(3, 2), Frac(1, 3), Frac(1, 2)): (Frac(1), Frac(3, 4)),
    (Frac(3, 2), Frac(3), Frac(1, 2)): (Frac(1), Frac(3, 4)),
    (Frac(3, 2), Frac(1, 3), Frac(9, 2)): (Frac(1), Frac(3, 4)),
    (Frac(6), Frac(3, 2), Frac(3, 2)): (Frac(5, 4), Frac(5, 4)),
    (Frac(2, 3), Frac(3, 2), Frac(3, 2)): (Frac(5, 4), Frac(5, 4)),
}

H_SCHWARZ_CLASSES = {
    # (alpha, beta, gamma) -> (e1, e2) in H'' = sdot^2 / (s^{e1} (s-1)^{e2})
    (Frac(4, 3), Frac(4, 3), Frac(4, 3)): (Frac(4, 3), Frac(4, 3)),
    (Frac(4, 3), Frac(1, 3), Frac(1, 3)): (Frac(4, 3), Frac(4, 3)),
    # the asymmetric row: these triples satisfy the equation with the
    # s <-> 1-s image of the displayed weight, i.e. exponents (1, 4/3)
    (Frac(2, 3), Frac(1, 2), Frac(1, 3)): (Frac(1), Frac(4, 3)),
    (Frac(2, 3), Frac(1, 2), Frac(4, 3)): (Frac(1), Frac(4, 3)),
    (Frac(2, 3), Frac(2), Frac(1, 3)): (Frac(1), Frac(4, 3)),
    (Frac(8, 3), Frac(2, 3), Frac(2, 3)): (Frac(5, 3), Frac(5, 3)),
    (Frac(2, 3), Frac(2, 3), Frac(2, 3)): (Frac(5, 3), Frac(5, 3)),
}

F_HYPER_TRIPLES = (
    (Frac(-2, 3), Frac(5, 6), Frac(1, 2)),
    (Frac(-4, 3), Frac(5, 3), Frac(2, 3)),
    (Frac(-2, 3), Frac(5, 6), Frac(2, 3)),
)

H_HYPER_TRIPLES = (
    (Frac(-1, 4), Frac(5, 12), Frac(1, 2)),
    (Frac(-1, 4), Frac(5, 12), Frac(2, 3)),
    (Frac(-1, 2), Frac(5, 6), Frac(2, 3)),
)

F_POWERS = (Frac(-1), Frac(1, 3), Frac(2, 3), Frac(2))
H_POWERS = (Frac(-2), Frac(-1, 2), Frac(1, 2), Frac(2))

_S_DOMAIN = (0.05, 0.95)


def _build_catalog() -> Tuple[SolutionSpec, ...]:
    entries = []
    for m in F_POWERS:
        entries.append(
            SolutionSpec(
                id=f"F-power-{_fmt(m)}",
                picture="F_of_q",
                family="power_m",
                params={"m": m},
                param_name="q",
                domain=(0.05, 10.0),
                note=f"F(q) = q^{_fmt(m)}, one of the four flat power laws",
            )
        )
    for m in H_POWERS:
        entries.append(
            SolutionSpec(
                id=f"H-power-{_fmt(m)}",
                picture="H_of_t",
                family="power_m",
                params={"m": m},
                param_name="t",
                domain=(0.05, 10.0),
                note=f"H(t) = t^{_fmt(m)}, one of the four dual flat power laws",
            )
        )
    entries.append(
        SolutionSpec(
            id="F-power-3",
            picture="F_of_q",
            family="power_m",
            params={"m": Frac(3)},
            param_name="q",
            domain=(0.05, 10.0),
            note="negative control: q^3 is not flat",
            expect_fail=True,
        )
    )
    entries.append(
        SolutionSpec(
            id="H-power-3",
            picture="H_of_t",
            family="power_m",
            params={"m": Frac(3)},
            param_name="t",
            domain=(0.05, 10.0),
            note="negative control: t^3 is not flat",
            expect_fail=True,
        )
    )
    for abc in F_HYPER_TRIPLES:
        entries.append(
            SolutionSpec(
                id=_triple_id("F-triple", abc),
                picture="F_of_q",
                family="hyper_triple",
                params={"abc": abc, "constants": (1.0, 0.0, 0.0, 1.0)},
                param_name="s",
                domain=_S_DOMAIN,
                note="F'' = z1^3 over a flat hypergeometric pair",
            )
        )
    for abc in H_HYPER_TRIPLES:
        entries.append(
            SolutionSpec(
                id=_triple_id("H-triple", abc),
                picture="H_of_t",
                family="hyper_triple",
                params={"abc": abc, "constants": (1.0, 0.0, 0.0, 1.0)},
                param_name="s",
                domain=_S_DOMAIN,
                note="H'' = w1^4 over a dual flat hypergeometric pair",
            )
        )
    for tr, exps in F_SCHWARZ_CLASSES.items():
        entries.append(
            SolutionSpec(
                id=_triple_id("F-schwarz", tr),
                picture="F_of_q",
                family="schwarz_triple_param",
                params={"triple": tr, "exponents": exps, "power": Frac(3, 2)},
                param_name="s",
                domain=_S_DOMAIN,
                note="F'' = sdot^(3/2)/(s^e1 (s-1)^e2) over a Schwarzian solution",
            )
        )
    for tr, exps in H_SCHWARZ_CLASSES.items():
        entries.append(
            SolutionSpec(
                id=_triple_id("H-schwarz", tr),
                picture="H_of_t",
                family="schwarz_triple_param",
                params={"triple": tr, "exponents": exps, "power": Frac(2)},
                param_name="s",
                domain=_S_DOMAIN,
                note="H'' = sdot^2/(s^e1 (s-1)^e2) over a Schwarzian solution",
            )
        )
    entries.append(
        SolutionSpec(
            id="F-two-pole",
            picture="F_of_q",
            family="two_pole",
            params={"B": 1.0, "C": 3.0, "k": Frac(2, 3)},
            param_name="q",
            domain=(-0.95, 5.0),
            note="F rebuilt from the two-pole third-order solution, k = 2/3",
        )
    )
    entries.append(
        SolutionSpec(
            id="H-two-pole",
            picture="H_of_t",
            family="two_pole",
            params={"B": 0.0, "C": 1.0},
            param_name="x",
            domain=(0.05, 10.0),
            note="closed form H(x) = -(1/192) sqrt(x+C)(4x+3B+C)/(sqrt(x+B)(B-C)^3)",
            aliases=("twistor-case-5",),
        )
    )
    entries.append(
        SolutionSpec(
            id="H-ds-curve",
            picture="H_of_t",
            family="ds_curve",
            params={"a": 0.0, "b": 1.0, "f": (0.0, 0.0, 0.0)},
            param_name="t",
            domain=(1.05, 10.0),
            note="H = y' for the algebraic-curve branch y = sqrt((t-a)(t-b)^3) - f(t)",
        )
    )
    entries.append(
        SolutionSpec(
            id="F-elementary-r",
            picture="F_of_q",
            family="elementary_r",
            params={"constants": (1.0, 1.0, 1.0, -1.0)},
            param_name="r",
            domain=(1.05, 4.0),
            note="elementary pair in r = sqrt(s): z = c (r-1)^(1/3)(3r+1) + ...",
        )
    )
    return tuple(entries)


_CATALOG = _build_catalog()
_BY_ID = {}
for _e in _CATALOG:
    _BY_ID[_e.id] = _e
    for _a in _e.aliases:
        _BY_ID[_a] = _e


def catalog() -> Tuple[SolutionSpec, ...]:
    """All catalog entries, including the expect-fail negative controls."""
    return _CATALOG


def get_spec(case_id: str) -> SolutionSpec:
    try:
        return _BY_ID[case_id]
    except KeyError:
        raise UnknownCaseId(f"no catalog entry named {case_id!r}") from None


def _double_antiderivative(f: Jet1) -> Jet1:
    return f.antiderivative(0.0).antiderivative(0.0)


def _second_derivative_chain(pair, point: float, order: int, power: int) -> Jet1:
    """F'' (or H'') = z1^power reparametrised from s (or r) to q = z2/z1."""
    z1, z2 = pair
    if z1.value() == 0:
        raise DegenerateError("z1 vanishes at the basepoint")
    q_of_s = z2 / z1
    if q_of_s.deriv(1) == 0:
        raise DegenerateError("dq/ds = 0: the pair is degenerate here")
    s_of_q = jet_invert(q_of_s)
    return jet_compose(z1 ** power, s_of_q)


def F_jet(spec: SolutionSpec, point: float, order: int = 8) -> Jet1:
    """Jet of F(q) (F-picture) or H(t) (H-picture) for a catalog entry.

    `point` is a basepoint for spec.param_name; for the s- and
    r-parametrised families the returned jet sits at the induced q0 (t0).
    """
    lo, hi = spec.domain
    if not (lo <= point <= hi):
        raise DomainError(
            f"{spec.id}: basepoint {point} outside admissible [{lo}, {hi}]"
        )
    fam = spec.family
    if fam == "power_m":
        m = spec.params["m"]
        return jet_pow(jet_var(float(point), order), Fraction(m))
    if fam == "hyper_triple":
        abc = spec.params["abc"]
        c1, c2, c3, c4 = spec.params["constants"]
        e1, e2 = hypergeom_pair(HyperTriple(*abc), float(point), order)
        pair = (c1 * e1 + c2 * e2, c3 * e1 + c4 * e2)
        power = 3 if spec.picture == "F_of_q" else 4
        dd = _second_derivative_chain(pair, point, order, power)
        return _double_antiderivative(dd)
    if fam == "elementary_r":
        cid = ClosedFormId("elementary_r", tuple(spec.params["constants"]))
        pair = closed_form_solution(cid, float(point), order)
        dd = _second_derivative_chain(pair, point, order, 3)
        return _double_antiderivative(dd)
    if fam == "schwarz_triple_param":
        tr = SchwarzTriple(*spec.params["triple"])
        e1, e2 = spec.params["exponents"]
        pw = spec.params["power"]
        s = schwarz_solution(tr, float(point), order)
        sdot = s.derivative()
        if sdot.value() <= 0:
            raise BranchError("sdot <= 0: outside the restricted real branch")
        num = jet_pow(sdot, Fraction(pw)) if Fraction(pw).denominator == 1 else jet_abs_pow(sdot, float(pw))
        # s in (0,1) makes s-1 negative; |.| powers rescale by a constant,
        # which the degree-4 homogeneous sixth-order equations ignore
        den = jet_abs_pow(s, float(e1)) * jet_abs_pow(s - 1.0, float(e2))
        return _double_antiderivative(num / den)
    if fam == "two_pole":
        if spec.picture == "F_of_q":
            B, C, k = spec.params["B"], spec.params["C"], spec.params["k"]
            I = two_pole_solution(k, B, C, float(point), order)
            return build_F_from_I(I, constants=(0.0, 0.0, 0.0))
        B, C = spec.params["B"], spec.params["C"]
        if point <= max(-B, -C):
            raise DomainError("x must exceed both poles for the real branch")
        x = jet_var(float(point), order)
        num = jet_sqrt(x + C) * (4.0 * x + 3.0 * B + C)
        return (-1.0 / (192.0 * (B - C) ** 3)) * num / jet_sqrt(x + B)
    if fam == "ds_curve":
        a, b = spec.params["a"], spec.params["b"]
        y = ds_curve_solution(a, b, spec.params["f"], float(point), order)
        return y.derivative()
    raise UnknownCaseId(f"unhandled family {fam!r}")


def ds_curve_solution(
    a: float, b: float, f: Tuple[float, float, float], t0: float, order: int = 8
) -> Jet1:
    """Jet of the curve branch y = +sqrt((t-a)(t-b)^3) - f(t) at t0."""
    if a == b:
        raise DegenerateError("a = b collapses the curve")
    t = jet_var(float(t0), order)
    radicand = (t - a) * (t - b) ** 3
    if radicand.value() <= 0:
        raise BranchError("(t0-a)(t0-b)^3 <= 0: no real branch here")
    f0, f1, f2 = f
    return jet_sqrt(radicand) - (f0 + f1 * t + f2 * t * t)


def ds_curve_u(a: float, b: float, t0: float, order: int = 6) -> Jet1:
    """u(t) = (3/2) d/dt log y''' for the curve branch with f = 0."""
    y = ds_curve_solution(a, b, (0.0, 0.0, 0.0), t0, order + 4)
    y3 = y.derivative().derivative().derivative()
    return (1.5 * y3.derivative() / y3).truncate(order)


def legendre_transform(F: Jet1) -> Tuple[float, Jet1]:
    """(t0, H) with H the Legendre transform of F: t = F', H(t) = q t - F."""
    Fp = F.derivative()
    if Fp.deriv(1) == 0:
        raise DegenerateError("F'' = 0: the Legendre transform degenerates")
    q0 = F.basepoint
    t0 = Fp.value()
    q_of_t = jet_invert(Fp)  # H' = q as a function of t
    H0 = q0 * t0 - F.value()
    return t0, q_of_t.antiderivative(H0)


def legendre_pair_map(z1: Jet1, z2: Jet1, direction: str) -> Tuple[Jet1, Jet1]:
    """Map a solution pair between the two pictures, in the s variable.

    F_to_H: w1 = z1^(-3/4), w2 = w1 * int z1 (z2' z1 - z1' z2) ds.
    H_to_F: z1 = w1^(-4/3), z2 = z1 * int w1^2 (w2' w1 - w1' w2) ds.
    Antiderivative constants vanish at the basepoint (the catalog gauge).
    """
    if direction not in ("F_to_H", "H_to_F"):
        raise ValueError(f"unknown direction {direction!r}")
    if np.real(z1.value()) <= 0:
        raise BranchError("leading solution must be positive at the basepoint")
    wronsk = z2.derivative() * z1 - z1.derivative() * z2
    if direction == "F_to_H":
        w1 = jet_pow(z1, Fraction(-3, 4))
        K = (z1 * wronsk).antiderivative(0.0)
    else:
        w1 = jet_pow(z1, Fraction(-4, 3))
        K = (z1 * z1 * wronsk).antiderivative(0.0)
    return w1, w1 * K
