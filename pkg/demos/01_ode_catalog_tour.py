"""Tour of the solution catalog and its ODE residual certificates.

Every catalog entry packages a closed-form F(q) or H(t) whose associated
rank-2 distribution is maximally symmetric. The certificate is numeric:
the relevant sixth-order ODE residual vanishes on the jet of the
solution. Two deliberately non-flat entries (F = q^3, H = t^3) are kept
as controls and are expected to fail.
"""

from c235.chazy import residual_6th, residual_ds6
from c235.dist import F_jet, catalog

def main():
    print(f"{'case id':34s} {'picture':8s} {'residual':>12s}  control?")
    for spec in catalog():
        lo, hi = spec.domain
        lam = 0.5 * (lo + hi) if hi < 2 else lo + 0.4
        residual = residual_6th if spec.picture == "F_of_q" else residual_ds6
        r = residual(F_jet(spec, lam))
        flag = "control" if spec.expect_fail else ""
        print(f"{spec.id:34s} {spec.picture:8s} {r:12.3e}  {flag}")

if __name__ == "__main__":
    main()
