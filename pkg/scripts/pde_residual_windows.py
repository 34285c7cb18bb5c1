"""Finite-difference PDE residual of solved profiles over shrinking inner radii.

Shows where the residual check stops being resolvable in double precision:
near r = 10 rho the term r^2 f(u) falls far below the round-off of u.

Example:
  python3 scripts/pde_residual_windows.py --problem t1 --gammas 6,8,10,12
"""
import argparse

from mtblowup import bubble, diagnostics


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--problem", choices=("t1", "gtype"), default="t1")
    ap.add_argument("--gammas", default="6,8,10,12")
    ap.add_argument("--h", type=float, default=1e-2)
    args = ap.parse_args()

    params = {"l": 1.0} if args.problem == "t1" else {"a": 2.0}
    for g in (float(v) for v in args.gammas.split(",")):
        res = diagnostics.solve(args.problem, g, params)
        rho = bubble.scales_for(res).rho
        print(f"gamma={g:g} rho={rho:.3e}")
        for r_lo in (10 * rho, 1e-6, 1e-4, 1e-2, 0.05, 0.2):
            if r_lo >= 0.9 or r_lo < 10 * rho:
                continue
            resid, fmax = diagnostics.pde_residual(res, r_lo=r_lo, h=args.h)
            print(f"  r_lo={r_lo:.2e}  residual/max|f| = {resid / fmax:.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
