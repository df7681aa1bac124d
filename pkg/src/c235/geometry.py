"""Metric assembly from coframes and curvature certification.

The five coordinates are (x, y, z, p, lam) where lam is the jet variable
of the supplied data: q itself in the F-picture, t in the dual picture, r
or s for the parametrised families. All metric components are exact
order-2 multivariate jets, so the curvature arrays need no finite
differences.

Conventions: Gamma^a_bc = (1/2) g^{ad}(d_b g_dc + d_c g_bd - d_d g_bc);
R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma Gamma terms;
Ricci_bd = R^a_bad.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import DegenerateError, SingularCoframeError, SingularMetricError
from .jets import Jet1, MJet2, jet_var
from .dist import SolutionSpec, F_jet, get_spec
from .specialfn import ClosedFormId, closed_form_solution

DIM = 5

# eta for g = 2 th1 th5 - 2 th2 th4 + (4/3) th3 th3
ETA = np.zeros((5, 5))
ETA[0, 4] = ETA[4, 0] = 1.0
ETA[1, 3] = ETA[3, 1] = -1.0
ETA[2, 2] = 4.0 / 3.0


@dataclass(frozen=True)
class Coframe:
    """Rows i give theta^i = theta[i][a] dx^a over coords."""

    theta: tuple  # 5-tuple of 5-tuples of MJet2
    eta: np.ndarray
    coords: Tuple[str, ...]

    def value_matrix(self) -> np.ndarray:
        return np.array([[c.value for c in row] for row in self.theta])


@dataclass(frozen=True)
class CurvatureReport:
    christoffel: np.ndarray
    riemann: np.ndarray  # fully lowered R_abcd
    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray  # fully lowered C_abcd
    maxAbsWeyl: float
    maxAbsRicci: float
    metricScale: float


def _const(v: float) -> MJet2:
    return MJet2.constant(v, DIM)


def _coord(v: float, axis: int) -> MJet2:
    return MJet2.coordinate(v, axis, DIM)


def _of_lam(jet: Jet1) -> MJet2:
    return MJet2.from_jet1(jet, 4, DIM)


def _chain(f: Jet1, q_of: Jet1) -> Jet1:
    """d f / d q given both as jets in lam, via df/dq = f'(lam)/q'(lam)."""
    return f.derivative() / q_of.derivative()


class _FrameData:
    """The lam-dependent scalars entering the coframe, plus point data."""

    def __init__(self, q_of: Jet1, F_of: Jet1, point4: Sequence[float]):
        if q_of.deriv(1) == 0:
            raise DegenerateError("dq/dlam = 0")
        self.q_of = q_of
        self.F_of = F_of
        self.Fp = _chain(F_of, q_of)
        self.Fpp = _chain(self.Fp, q_of)
        if self.Fpp.value() == 0:
            raise DegenerateError("F'' = 0 at the basepoint")
        self.F3 = _chain(self.Fpp, q_of)
        self.F4 = _chain(self.F3, q_of)
        self.I = 2.0 * self.F3 / self.Fpp
        self.Iprime = _chain(self.I, q_of)
        x0, y0, z0, p0 = (float(v) for v in point4)
        self.point4 = (x0, y0, z0, p0)
        self.lam0 = float(q_of.basepoint)

    def omegas(self):
        """The base 1-forms omega_1 .. omega_5 as coefficient rows."""
        x0, y0, z0, p0 = self.point4
        zero = _const(0.0)
        one = _const(1.0)
        p = _coord(p0, 3)
        qf = _of_lam(self.q_of)
        Ff = _of_lam(self.F_of)
        qdot = _of_lam(self.q_of.derivative())
        w1 = (-p, one, zero, zero, zero)
        w2 = (-qf, zero, zero, one, zero)
        w3 = (-Ff, zero, one, zero, zero)
        w4 = (zero, zero, zero, zero, qdot)
        w5 = (one, zero, zero, zero, zero)
        return w1, w2, w3, w4, w5


def _lincomb(*terms):
    """Sum of (coeff: MJet2, row) products, as a new coefficient row."""
    out = [_const(0.0)] * DIM
    for coeff, row in terms:
        for a in range(DIM):
            out[a] = out[a] + coeff * row[a]
    return tuple(out)


def build_coframe(q_of: Jet1, F_of: Jet1, point4, coords=("x", "y", "z", "p", "q")) -> Coframe:
    """The five theta rows of the full coframe from F-in-q data.

    q_of and F_of are jets in the fifth coordinate lam; in the plain
    F-picture q_of is the identity jet. The dual picture uses
    q_of = H', F_of = t H' - H, which reproduces the displayed dual
    coframe exactly.
    """
    fd = _FrameData(q_of, F_of, point4)
    w1, w2, w3, w4, w5 = fd.omegas()
    one = _const(1.0)
    Fp = _of_lam(fd.Fp)
    Fpp = _of_lam(fd.Fpp)
    F3 = _of_lam(fd.F3)
    F4 = _of_lam(fd.F4)
    inv_Fpp = Fpp.reciprocal()
    comb = _lincomb((Fp, w2), (-one, w3))  # F' w2 - w3
    th1 = _lincomb((one, w1), (-inv_Fpp, comb))
    th2 = _lincomb((inv_Fpp, comb))
    th3 = _lincomb(
        (one - Fp * F3 / (Fpp * Fpp * 4.0), w2),
        (F3 / (Fpp * Fpp * 4.0), w3),
    )
    coef4 = (F3 * F3 * 7.0 - Fpp * F4 * 4.0) / (Fpp * Fpp * Fpp * 40.0)
    th4 = _lincomb((coef4, comb), (one, w4), (-one, w5))
    th5 = _lincomb((-one, w4))
    return Coframe((th1, th2, th3, th4, th5), ETA, tuple(coords))


def coframe_H(H: Jet1, point4, coords=("x", "y", "z", "p", "t")) -> Coframe:
    """The dual-picture coframe assembled directly from the H displays."""
    t0 = float(H.basepoint)
    Hp = H.derivative()
    Hpp = Hp.derivative()
    if Hpp.value() == 0:
        raise DegenerateError("H'' = 0")
    H3 = Hpp.derivative()
    H4 = H3.derivative()
    fd = _FrameData(Hp, jet_var(t0, H.order) * Hp - H, point4)
    w1, w2, w3, w4, w5 = fd.omegas()
    one = _const(1.0)
    t = _coord(t0, 4)
    Hppf = _of_lam(Hpp)
    H3f = _of_lam(H3)
    H4f = _of_lam(H4)
    comb = _lincomb((t, w2), (-one, w3))  # t w2 - w3
    th1 = _lincomb((one, w1), (-Hppf, comb))
    th2 = _lincomb((Hppf, comb))
    th3 = _lincomb((one + t * H3f / (Hppf * 4.0), w2), (-H3f / (Hppf * 4.0), w3))
    coef4 = (Hppf * H4f * 4.0 - H3f * H3f * 5.0) / (Hppf * Hppf * Hppf * 40.0)
    th4 = _lincomb((coef4, comb), (one, w4), (-one, w5))
    th5 = _lincomb((-one, w4))
    return Coframe((th1, th2, th3, th4, th5), ETA, tuple(coords))


def reduced_omegas(q_of: Jet1, F_of: Jet1, point4):
    """(omega-tilde rows, I, I') for the reduced-form assembly."""
    fd = _FrameData(q_of, F_of, point4)
    w1, w2, w3, w4, w5 = fd.omegas()
    inv_Fpp = _of_lam(fd.Fpp).reciprocal()
    Fp = _of_lam(fd.Fp)
    one = _const(1.0)
    wt2 = _lincomb((inv_Fpp * Fp, w2), (-inv_Fpp, w3))
    return (w1, wt2, w2, w4, w5), fd


def reduced_metric(q_of: Jet1, F_of: Jet1, point4):
    """g from the reduced form: 2 wt2 wt5 - 2 wt1 wt4 + (4/3) wt3^2 + I-terms."""
    (wt1, wt2, wt3, wt4, wt5), fd = reduced_omegas(q_of, F_of, point4)
    I = _of_lam(fd.I)
    Ip = _of_lam(fd.Iprime)
    g = np.empty((DIM, DIM), dtype=object)
    for a in range(DIM):
        for b in range(DIM):
            g[a, b] = (
                wt2[a] * wt5[b] + wt5[a] * wt2[b]
                - wt1[a] * wt4[b] - wt4[a] * wt1[b]
                + wt3[a] * wt3[b] * (4.0 / 3.0)
                - (I / 6.0) * (wt2[a] * wt3[b] + wt3[a] * wt2[b])
                + (Ip - I * I / 6.0) * wt2[a] * wt2[b] * 0.1
            )
    return g


def metric_at(cf: Coframe) -> np.ndarray:
    """g_ab = eta_ij theta^i_a theta^j_b as a matrix of order-2 jets."""
    W = cf.value_matrix()
    if np.max(np.abs(W)) == 0.0 or np.linalg.cond(W) > 1e13:
        raise SingularCoframeError("coframe is singular at this point")
    g = np.empty((DIM, DIM), dtype=object)
    for a in range(DIM):
        for b in range(DIM):
            acc = _const(0.0)
            for i in range(DIM):
                for j in range(DIM):
                    if cf.eta[i, j] != 0.0:
                        acc = acc + cf.theta[i][a] * cf.theta[j][b] * cf.eta[i, j]
            g[a, b] = acc
    return g


def _metric_arrays(g) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    dim = g.shape[0]
    G = np.array([[g[a, b].value for b in range(dim)] for a in range(dim)])
    dG = np.empty((dim, dim, dim))
    d2G = np.empty((dim, dim, dim, dim))
    for a in range(dim):
        for b in range(dim):
            dG[:, a, b] = g[a, b].gradient
            d2G[:, :, a, b] = g[a, b].hessian
    return G, dG, d2G


def curvature(g: np.ndarray) -> CurvatureReport:
    """Full curvature data of a metric given as a matrix of order-2 jets."""
    dim = g.shape[0]
    G, dG, d2G = _metric_arrays(g)
    G = 0.5 * (G + G.T)
    if np.max(np.abs(G)) == 0.0 or np.linalg.cond(G) > 1e13:
        raise SingularMetricError("metric is singular at this point")
    ginv = np.linalg.inv(G)
    # Gamma_dbc lowered, then raised
    Glow = 0.5 * (
        np.einsum("bdc->dbc", dG) + np.einsum("cbd->dbc", dG) - dG
    )
    Gam = np.einsum("ad,dbc->abc", ginv, Glow)
    dginv = -np.einsum("af,efh,hd->ead", ginv, dG, ginv)
    dGlow = 0.5 * (
        np.einsum("ebdc->edbc", d2G) + np.einsum("ecbd->edbc", d2G) - d2G
    )
    dGam = np.einsum("ead,dbc->eabc", dginv, Glow) + np.einsum(
        "ad,edbc->eabc", ginv, dGlow
    )
    Rup = (
        np.einsum("cadb->abcd", dGam)
        - np.einsum("dacb->abcd", dGam)
        + np.einsum("ace,edb->abcd", Gam, Gam)
        - np.einsum("ade,ecb->abcd", Gam, Gam)
    )
    Rlow = np.einsum("ae,ebcd->abcd", G, Rup)
    ricci = np.einsum("abad->bd", Rup)
    ricci = 0.5 * (ricci + ricci.T)
    scalar = float(np.einsum("bd,bd->", ginv, ricci))
    n = dim
    gR = np.einsum("ac,db->abcd", G, ricci)
    term1 = 0.5 * (
        gR - np.einsum("ad,cb->abcd", G, ricci)
        - np.einsum("bc,da->abcd", G, ricci) + np.einsum("bd,ca->abcd", G, ricci)
    )
    gg = 0.5 * (
        np.einsum("ac,db->abcd", G, G) - np.einsum("ad,cb->abcd", G, G)
    )
    weyl = Rlow - (2.0 / (n - 2)) * term1 + (2.0 / ((n - 1) * (n - 2))) * scalar * gg
    return CurvatureReport(
        christoffel=Gam,
        riemann=Rlow,
        ricci=ricci,
        scalar=scalar,
        weyl=weyl,
        maxAbsWeyl=float(np.max(np.abs(weyl))),
        maxAbsRicci=float(np.max(np.abs(ricci))),
        metricScale=float(np.max(np.abs(G))),
    )


def riemann_symmetry_error(rep: CurvatureReport) -> float:
    """Max relative violation of the algebraic Riemann identities."""
    R = rep.riemann
    scale = max(float(np.max(np.abs(R))), 1.0)
    e1 = np.max(np.abs(R + np.einsum("bacd->abcd", R)))
    e2 = np.max(np.abs(R + np.einsum("abdc->abcd", R)))
    e3 = np.max(np.abs(R - np.einsum("cdab->abcd", R)))
    bianchi = R + np.einsum("acdb->abcd", R) + np.einsum("adbc->abcd", R)
    e4 = np.max(np.abs(bianchi))
    return float(max(e1, e2, e3, e4) / scale)


def weyl_trace_error(rep: CurvatureReport, g: np.ndarray) -> float:
    """Max contraction of the Weyl tensor with the inverse metric, relative."""
    dim = g.shape[0]
    G = np.array([[g[a, b].value for b in range(dim)] for a in range(dim)])
    ginv = np.linalg.inv(0.5 * (G + G.T))
    scale = max(rep.maxAbsWeyl, rep.metricScale * 1e-30, 1e-30)
    t1 = np.einsum("ac,abcd->bd", ginv, rep.weyl)
    t2 = np.einsum("bd,abcd->ac", ginv, rep.weyl)
    t3 = np.einsum("ad,abcd->bc", ginv, rep.weyl)
    err = max(np.max(np.abs(t1)), np.max(np.abs(t2)), np.max(np.abs(t3)))
    return float(err / max(scale, 1e-30))


def metric_signature(g: np.ndarray) -> Tuple[int, int]:
    dim = g.shape[0]
    G = np.array([[g[a, b].value for b in range(dim)] for a in range(dim)])
    ev = np.linalg.eigvalsh(0.5 * (G + G.T))
    neg = int(np.sum(ev < 0))
    pos = int(np.sum(ev > 0))
    return tuple(sorted((neg, pos)))


# --- catalog plumbing ---------------------------------------------------


def frame_jets_for_spec(spec: SolutionSpec, param_point: float, order: int = 8):
    """(q_of, F_of) jets in the fifth coordinate for a catalog entry.

    F-picture entries use lam = q directly except elementary_r, which
    keeps lam = r so the displayed Ricci statement can be checked in the
    r coordinate. H-picture entries use lam = t with the Legendre data
    q = H'(t), F = t H'(t) - H(t).
    """
    if spec.picture == "H_of_t":
        H = F_jet(spec, param_point, order)
        t = jet_var(float(H.basepoint), order)
        return H.derivative(), t * H.derivative() - H
    if spec.family == "elementary_r":
        cid = ClosedFormId("elementary_r", tuple(spec.params["constants"]))
        z1, z2 = closed_form_solution(cid, float(param_point), order)
        q_of = z2 / z1
        Fpp_of_r = z1 ** 3
        Fp_of_r = (Fpp_of_r * q_of.derivative()).antiderivative(0.0)
        F_of_r = (Fp_of_r * q_of.derivative()).antiderivative(0.0)
        return q_of, F_of_r
    Fq = F_jet(spec, param_point, order)
    q_of = jet_var(float(Fq.basepoint), order)
    return q_of, Fq


def coframe_for_spec(spec: SolutionSpec, point5, order: int = 8) -> Coframe:
    """Full coframe for a catalog entry at (x, y, z, p, param)."""
    q_of, F_of = frame_jets_for_spec(spec, float(point5[4]), order)
    lam_name = {"H_of_t": "t"}.get(spec.picture, "q")
    if spec.family == "elementary_r":
        lam_name = "r"
    if spec.family == "two_pole" and spec.picture == "H_of_t":
        lam_name = "x"
    coords = ("x", "y", "z", "p", lam_name)
    return build_coframe(q_of, F_of, point5[:4], coords)


def sample_points(spec: SolutionSpec, n: int, seed: int):
    """n points (x,y,z,p in [-1,1], param in the admissible domain)."""
    rng = np.random.default_rng(seed)
    lo, hi = spec.domain
    pts = []
    for _ in range(n):
        xyzp = rng.uniform(-1.0, 1.0, size=4)
        lam = rng.uniform(lo, hi)
        pts.append((*xyzp, lam))
    return pts


def flatness_suite(spec: SolutionSpec, points, tol: float = 1e-7):
    """Per-point Weyl-flatness ratios for a catalog entry."""
    if isinstance(spec, str):
        spec = get_spec(spec)
    results = []
    for pt in points:
        cf = coframe_for_spec(spec, pt)
        rep = curvature(metric_at(cf))
        ratio = rep.maxAbsWeyl / rep.metricScale
        results.append(
            {"point": tuple(float(v) for v in pt), "weylRatio": float(ratio), "pass": bool(ratio < tol)}
        )
    return {
        "id": spec.id,
        "tol": tol,
        "results": results,
        "pass": all(r["pass"] for r in results),
    }


def _frame_components_rank2(T: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Components of a (0,2) tensor against the frame rows of W."""
    Winv = np.linalg.inv(W)
    return Winv.T @ T @ Winv


def _frame_components_rank4(T: np.ndarray, W: np.ndarray) -> np.ndarray:
    Winv = np.linalg.inv(W)
    return np.einsum("ai,bj,ck,dl,abcd->ijkl", Winv, Winv, Winv, Winv, T)


def _reduced_frame_matrix(q_of, F_of, point4) -> np.ndarray:
    rows, _ = reduced_omegas(q_of, F_of, point4)
    return np.array([[c.value for c in row] for row in rows])


def ricci_identity_check(q_of: Jet1, F_of: Jet1, point4) -> float:
    """Relative error of Ricci against (9/120)(6I' - I^2) on wt4 x wt4."""
    g = reduced_metric(q_of, F_of, point4)
    rep = curvature(g)
    (rows, fd) = reduced_omegas(q_of, F_of, point4)
    W = np.array([[c.value for c in row] for row in rows])
    Rf = _frame_components_rank2(rep.ricci, W)
    I0, Ip0 = fd.I.value(), fd.Iprime.value()
    expected = (9.0 / 120.0) * (6.0 * Ip0 - I0 * I0)
    scale = max(abs(expected), rep.metricScale * 1e-8, 1e-12)
    off = Rf.copy()
    off[3, 3] = 0.0
    err_off = np.max(np.abs(off)) / max(abs(expected), 1.0)
    err_44 = abs(Rf[3, 3] - expected) / scale
    return float(max(err_44, err_off))


def conformal_rescale_check(q_of: Jet1, F_of: Jet1, nu: Jet1, point4, nu_in_lambda: bool = False):
    """Ricci of nu^{-2} g against (3/(40 nu))(40 nu'' + (6I'-I^2) nu).

    nu is a jet in q unless nu_in_lambda is set, in which case it is a
    jet in the fifth coordinate. nu'' in the prediction always means the
    second q-derivative. Returns a dict with the computed frame Ricci
    component, the displayed prediction, and their relative mismatch.
    """
    (rows, fd) = reduced_omegas(q_of, F_of, point4)
    from .jets import jet_compose

    if nu_in_lambda:
        nu_lam = nu
    elif q_of.coeffs[1] == 1.0 and not any(q_of.coeffs[2:]):
        nu_lam = nu
    else:
        nu_lam = jet_compose(nu, q_of)
    if nu_lam.value() <= 0:
        raise DegenerateError("nu must be positive")
    g = reduced_metric(q_of, F_of, point4)
    nu_m = _of_lam(nu_lam)
    scale2 = nu_m.reciprocal() * nu_m.reciprocal()
    ghat = np.empty_like(g)
    for a in range(DIM):
        for b in range(DIM):
            ghat[a, b] = g[a, b] * scale2
    rep = curvature(ghat)
    W = np.array([[c.value for c in row] for row in rows])
    Rf = _frame_components_rank2(rep.ricci, W)
    nupp = _chain(_chain(nu_lam, q_of), q_of).value()
    nu0 = nu_lam.value()
    I0, Ip0 = fd.I.value(), fd.Iprime.value()
    ode = 40.0 * nupp + (6.0 * Ip0 - I0 * I0) * nu0
    predicted = 3.0 / (40.0 * nu0) * ode
    # the rescaled-frame component: wt4 is unscaled, so compare directly
    computed = Rf[3, 3]
    off = Rf.copy()
    off[3, 3] = 0.0
    denom = max(abs(predicted), rep.metricScale * 1e-6, 1e-10)
    return {
        "computed": float(computed),
        "predicted": float(predicted),
        "odeValue": float(ode),
        "mismatch": float(abs(computed - predicted) / denom),
        "offComponentMax": float(np.max(np.abs(off))),
        "ricciMax": float(rep.maxAbsRicci),
    }


def weyl_equals_residual_check(H_jets: Sequence[Jet1], point4=(0.1, -0.2, 0.3, 0.4)):
    """The single frame Weyl component against the sixth-order ODE LHS.

    The Weyl tensor of the dual-picture metric has one independent frame
    component in the (theta^2, theta^5) slot; empirically it satisfies
    C * (H'')^8 = LHS / 100 at every point for every H. Returns the
    per-basepoint data and the relative spread of the normalised ratio.
    """
    rows = []
    for H in H_jets:
        cf = coframe_H(H, point4)
        rep = curvature(metric_at(cf))
        W = cf.value_matrix()
        Cf = _frame_components_rank4(rep.weyl, W)
        comp = Cf[1, 4, 1, 4]  # the single independent slot (theta^2, theta^5)
        d = [H.deriv(i) for i in range(7)]
        lhs = (
            10.0 * d[2] ** 3 * d[6]
            - 70.0 * d[2] ** 2 * d[3] * d[5]
            - 49.0 * d[2] ** 2 * d[4] ** 2
            + 280.0 * d[2] * d[3] ** 2 * d[4]
            - 175.0 * d[3] ** 4
        )
        ratio = comp * d[2] ** 8 / lhs if lhs != 0.0 else None
        rows.append(
            {"t0": float(H.basepoint), "weyl": float(comp), "ode": float(lhs),
             "ratio": None if ratio is None else float(ratio)}
        )
    ratios = np.array([r["ratio"] for r in rows if r["ratio"] is not None])
    if ratios.size == 0:
        spread = 0.0
        mean = 0.0
    else:
        mean = float(np.mean(ratios))
        spread = float(np.max(np.abs(ratios - mean)) / abs(mean)) if mean != 0 else float("inf")
    return {"rows": rows, "ratioMean": mean, "ratioSpread": spread}
