"""Batch verification driver.

Subcommands: list, verify, identities, curvature. All reports are
versioned JSON; exit code 0 means every requested check passed, 1 means
a check failed, 2 means a usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .chazy import residual_6th, residual_ds6
from .dist import F_jet, catalog, get_spec, legendre_transform
from .errors import C235Error, UnknownCaseId
from .jets import Jet1
from .specialfn import (
    CLOSED_FORM_HYPER,
    HyperTriple,
    TRANSFORM_KINDS,
    hypergeom_pair,
    transform_identity_check,
    wronskian_check,
)
from . import geometry, twistor

REPORT_VERSION = 1
DEFAULT_TOL = 1e-7
DEFAULT_POINTS = 10
DEFAULT_SEED = 0


def _default_tol() -> float:
    env = os.environ.get("C235_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        tol = float(env)
    except ValueError:
        raise SystemExit(2)
    return tol


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if getattr(args, "json", False) or not out:
        sys.stdout.write(text)


# --- list ----------------------------------------------------------------


def cmd_list(args) -> int:
    entries = sorted(catalog(), key=lambda s: s.id)
    if args.filter:
        try:
            key, value = args.filter.split("=", 1)
        except ValueError:
            print(f"bad --filter {args.filter!r}, expected key=value", file=sys.stderr)
            return 2
        if key not in ("id", "picture", "family", "param_name"):
            print(f"unknown filter key {key!r}", file=sys.stderr)
            return 2
        entries = [s for s in entries if getattr(s, key) == value]
    rows = [
        {
            "id": s.id,
            "picture": s.picture,
            "family": s.family,
            "paramName": s.param_name,
            "domain": list(s.domain),
            "expectFail": s.expect_fail,
            "aliases": list(s.aliases),
            "note": s.note,
        }
        for s in entries
    ]
    if args.json or args.out:
        _emit({"version": REPORT_VERSION, "cases": rows}, args)
    else:
        for r in rows:
            flag = " [control]" if r["expectFail"] else ""
            alias = f" (alias: {', '.join(r['aliases'])})" if r["aliases"] else ""
            print(f"{r['id']:42s} {r['picture']:8s} {r['family']:20s}{flag}{alias}")
    return 0


# --- verify --------------------------------------------------------------


def _verify_case(spec, points: int, tol: float, seed: int) -> dict:
    checks = []
    pts = geometry.sample_points(spec, points, seed)
    residual_fn = residual_6th if spec.picture == "F_of_q" else residual_ds6
    res_name = "ode_residual_F" if spec.picture == "F_of_q" else "ode_residual_H"
    for i, pt in enumerate(pts):
        try:
            jet = F_jet(spec, pt[4])
            value = residual_fn(jet)
            checks.append(
                {"name": res_name, "point": i, "value": float(value), "tol": tol,
                 "pass": bool(value < tol)}
            )
        except C235Error as exc:
            checks.append(
                {"name": res_name, "point": i, "value": None, "tol": tol,
                 "pass": False, "error": f"{type(exc).__name__}: {exc}"}
            )
    flat = geometry.flatness_suite(spec, pts, tol)
    for i, r in enumerate(flat["results"]):
        checks.append(
            {"name": "weyl_flatness", "point": i, "value": r["weylRatio"],
             "tol": tol, "pass": r["pass"]}
        )
    if spec.picture == "F_of_q":
        for i, pt in enumerate(pts):
            try:
                F = F_jet(spec, pt[4])
                _, H = legendre_transform(F)
                value = residual_ds6(H)
                checks.append(
                    {"name": "duality_residual", "point": i, "value": float(value),
                     "tol": tol, "pass": bool(value < tol)}
                )
            except C235Error as exc:
                checks.append(
                    {"name": "duality_residual", "point": i, "value": None,
                     "tol": tol, "pass": False,
                     "error": f"{type(exc).__name__}: {exc}"}
                )
    ok = all(c["pass"] for c in checks)
    return {"id": spec.id, "expectFail": spec.expect_fail, "checks": checks, "pass": ok}


def cmd_verify(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol()
    if args.points < 1 or tol <= 0:
        print("need --points >= 1 and --tol > 0", file=sys.stderr)
        return 2
    if args.case == "all":
        specs = sorted(catalog(), key=lambda s: s.id)
        honor_expect_fail = True
    else:
        try:
            specs = [get_spec(args.case)]
        except UnknownCaseId as exc:
            print(str(exc), file=sys.stderr)
            return 2
        honor_expect_fail = False
    cases = [_verify_case(s, args.points, tol, args.seed) for s in specs]
    if honor_expect_fail:
        effective = [c["pass"] != c["expectFail"] for c in cases]
    else:
        effective = [c["pass"] for c in cases]
    report = {
        "version": REPORT_VERSION,
        "config": {
            "caseIds": args.case,
            "pointsPerCase": args.points,
            "tol": tol,
            "seed": args.seed,
        },
        "cases": cases,
        "summary": {
            "passed": int(sum(effective)),
            "failed": int(len(effective) - sum(effective)),
        },
    }
    _emit(report, args)
    return 0 if all(effective) else 1


# --- identities ----------------------------------------------------------

IDENTITY_KINDS = TRANSFORM_KINDS + ("wronskian",)


def cmd_identities(args) -> int:
    tol = args.tol if args.tol is not None else 1e-10
    if args.samples < 1 or tol <= 0:
        print("need --samples >= 1 and --tol > 0", file=sys.stderr)
        return 2
    kinds = list(IDENTITY_KINDS) if args.kind == "all" else [args.kind]
    for kind in kinds:
        if kind not in IDENTITY_KINDS:
            print(f"unknown identity kind {kind!r}; choose from "
                  f"{', '.join(IDENTITY_KINDS)} or all", file=sys.stderr)
            return 2
    rng = np.random.default_rng(args.seed)
    results = []
    for kind in kinds:
        # the quadratic identity only holds on the s < 1/2 branch of the
        # symmetric argument 4s(1-s)
        hi = 0.45 if kind == "quadratic" else 0.92
        for i in range(args.samples):
            s0 = float(rng.uniform(0.08, hi))
            if kind == "wronskian":
                p = CLOSED_FORM_HYPER["table1_row1"]
                value = wronskian_check(
                    lambda s, p=p: hypergeom_pair(p, s), p, 0.5, s0
                )
            else:
                value = transform_identity_check(kind, s0)
            results.append(
                {"kind": kind, "sample": i, "s0": s0, "value": float(value),
                 "tol": tol, "pass": bool(value < tol)}
            )
    ok = all(r["pass"] for r in results)
    report = {
        "version": REPORT_VERSION,
        "config": {"kinds": kinds, "samples": args.samples, "tol": tol,
                   "seed": args.seed},
        "results": results,
        "summary": {"passed": int(sum(r["pass"] for r in results)),
                    "failed": int(sum(not r["pass"] for r in results))},
    }
    _emit(report, args)
    return 0 if ok else 1


# --- curvature -----------------------------------------------------------


def _parse_point(text: str, spec) -> tuple:
    vals = {}
    try:
        for part in text.split(","):
            key, raw = part.split("=", 1)
            vals[key.strip()] = float(raw)
    except ValueError:
        raise ValueError(f"malformed point {text!r}")
    missing = [k for k in ("x", "y", "z", "p", spec.param_name) if k not in vals]
    if missing:
        raise ValueError(f"point is missing coordinates: {', '.join(missing)}")
    return (vals["x"], vals["y"], vals["z"], vals["p"], vals[spec.param_name])


def cmd_curvature(args) -> int:
    try:
        spec = get_spec(args.case)
    except UnknownCaseId as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        pt = _parse_point(args.point, spec)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        cf = geometry.coframe_for_spec(spec, pt)
        g = geometry.metric_at(cf)
        rep = geometry.curvature(g)
    except C235Error as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    payload = {
        "version": REPORT_VERSION,
        "case": spec.id,
        "point": {"x": pt[0], "y": pt[1], "z": pt[2], "p": pt[3],
                  spec.param_name: pt[4]},
        "coords": list(cf.coords),
        "report": {
            "christoffel": rep.christoffel.tolist(),
            "riemann": rep.riemann.tolist(),
            "ricci": rep.ricci.tolist(),
            "scalar": rep.scalar,
            "weyl": rep.weyl.tolist(),
            "maxAbsWeyl": rep.maxAbsWeyl,
            "maxAbsRicci": rep.maxAbsRicci,
            "metricScale": rep.metricScale,
            "signature": list(geometry.metric_signature(g)),
        },
    }
    _emit(payload, args)
    return 0


# --- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="c235",
        description="verification suite for the flat (2,3,5)-distribution catalog",
    )
    parser.add_argument("--version", action="version", version=f"c235 {__version__}")
    sub = parser.add_subparsers(dest="command")

    p_list = sub.add_parser("list", help="list catalog cases")
    p_list.add_argument("--json", action="store_true")
    p_list.add_argument("--out")
    p_list.add_argument("--filter", help="key=value, e.g. picture=H_of_t")
    p_list.set_defaults(func=cmd_list)

    p_verify = sub.add_parser("verify", help="run residual and flatness checks")
    p_verify.add_argument("--case", default="all")
    p_verify.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--json", action="store_true")
    p_verify.add_argument("--out")
    p_verify.set_defaults(func=cmd_verify)

    p_ident = sub.add_parser("identities", help="run transformation identity checks")
    p_ident.add_argument("--kind", default="all")
    p_ident.add_argument("--samples", type=int, default=10)
    p_ident.add_argument("--tol", type=float, default=None)
    p_ident.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_ident.add_argument("--json", action="store_true")
    p_ident.add_argument("--out")
    p_ident.set_defaults(func=cmd_identities)

    p_curv = sub.add_parser("curvature", help="full curvature report at one point")
    p_curv.add_argument("--case", required=True)
    p_curv.add_argument("--point", required=True,
                        help="x=..,y=..,z=..,p=..,<param>=..")
    p_curv.add_argument("--json", action="store_true")
    p_curv.add_argument("--out")
    p_curv.set_defaults(func=cmd_curvature)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
