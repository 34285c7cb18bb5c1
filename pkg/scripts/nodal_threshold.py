"""Locate the smallest gamma at which the k-th zero lands in its search window.

Example:
  python3 scripts/nodal_threshold.py --l 1 --k 2 --lo 12 --hi 20
"""
import argparse

from mtblowup.shooting import ConfigurationError, NodalWindowError, solve_nodal


def succeeds(l: float, k: int, gamma: float) -> bool:
    try:
        solve_nodal(l, k, gamma)
        return True
    except (NodalWindowError, ConfigurationError):
        return False


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--l", type=float, default=1.0)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--lo", type=float, default=12.0)
    ap.add_argument("--hi", type=float, default=20.0)
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()

    lo, hi = args.lo, args.hi
    if succeeds(args.l, args.k, lo) or not succeeds(args.l, args.k, hi):
        raise SystemExit(f"need a failure at gamma={lo} and a success at gamma={hi}")
    while hi - lo > args.tol:
        mid = 0.5 * (lo + hi)
        if succeeds(args.l, args.k, mid):
            hi = mid
        else:
            lo = mid
    print(f"l={args.l} k={args.k}: window search fails at {lo:.4f}, succeeds at {hi:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
