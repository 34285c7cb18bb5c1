"""Command-line entry point.

Examples:
  python -m mtblowup eigen --k 2
  python -m mtblowup solve-t1 --l 1 --gamma 8 --profile u.csv
  python -m mtblowup sweep --problem t1 --l 1 --gammas 6,8,10,12 --out table.csv
  python -m mtblowup verify --out verify_out
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import acceptance, diagnostics
from .config import load_config
from .special_functions import eigen_data


def _json(obj) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return str(v)
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v

    return json.dumps(clean(obj), indent=2)


def _gammas(text: str) -> list[float]:
    return [float(g) for g in text.split(",") if g.strip()]


def _solve_and_print(problem: str, gamma: float, params: dict, args) -> int:
    tols = load_config(args.config).as_dict()
    res = diagnostics.solve(problem, gamma, params, tols)
    print(_json(res.to_dict()))
    if args.profile:
        res.profile.to_csv(args.profile)
    return 0


def cmd_eigen(args) -> int:
    e = eigen_data(args.k)
    print(_json({"k": e.k, "j0k": e.j0k, "lambda_k": e.lambda_k, "v_k(0)": e.norm_c, "r_k": e.r_k, "alpha_k": e.alpha_k}))
    return 0


def cmd_sweep(args) -> int:
    params = {"l": args.l, "k": args.k, "a": args.a, "g_variant": args.g_variant}
    tols = load_config(args.config).as_dict()
    reports, results = diagnostics.sweep(
        args.problem, params, _gammas(args.gammas), tols, workers=args.workers, keep_results=True
    )
    text = diagnostics.sweep_csv(reports)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.profiles:
        outdir = Path(args.profiles)
        outdir.mkdir(parents=True, exist_ok=True)
        for res in results:
            if res is not None:
                res.profile.to_csv(outdir / f"{args.problem}_gamma{res.gamma:g}.csv")
    return 0


def cmd_verify(args) -> int:
    run = acceptance.AcceptanceRun(tols=load_config(args.config).as_dict())
    criteria = [int(c) for c in args.criteria.split(",")] if args.criteria else list(range(1, 9))
    failed = 0
    for c in criteria:
        checks = getattr(run, f"criterion{c}")()
        for ch in checks:
            print(ch.line())
        ok = all(ch.passed for ch in checks)
        failed += not ok
        print(f"criterion {c}: {'PASS' if ok else 'FAIL'}")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for key in run.sweeps:
        (outdir / f"{key}.csv").write_text(run.csv(key))
    print(f"{len(criteria) - failed}/{len(criteria)} criteria passed; tables in {outdir}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mtblowup", description="Radial blow-up solutions on the unit disk.")
    ap.add_argument("--config", default=None, help="key=value file presetting ode_tol, shoot_tol_R, quad_tol")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", help="radial Dirichlet eigen-data of the unit disk")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("solve-t1", help="positive solution with first zero on r=1")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--profile", default=None, help="write r,u,du_dr CSV")
    p.set_defaults(func=lambda a: _solve_and_print("t1", a.gamma, {"l": a.l}, a))

    p = sub.add_parser("solve-nodal", help="sign-changing solution with k nodal regions")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--profile", default=None)
    p.set_defaults(func=lambda a: _solve_and_print("nodal", a.gamma, {"l": a.l, "k": a.k}, a))

    p = sub.add_parser("solve-g", help="u g(u) problem with the free zero rescaled onto r=1")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--g-variant", default="constant", choices=("constant", "default", "ramp"))
    p.add_argument("--profile", default=None)
    p.set_defaults(
        func=lambda a: _solve_and_print(
            "gtype", a.gamma, {"a": a.a, "g_variant": "constant" if a.g_variant == "default" else a.g_variant}, a
        )
    )

    p = sub.add_parser("sweep", help="solve and report over a list of gammas")
    p.add_argument("--problem", choices=("t1", "nodal", "gtype"), required=True)
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--g-variant", default="constant", choices=("constant", "ramp"))
    p.add_argument("--gammas", required=True, help="comma-separated, ascending")
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    p.add_argument("--profiles", default=None, help="directory for per-gamma profile CSVs")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the acceptance criteria; nonzero exit on failure")
    p.add_argument("--out", default="verify_out")
    p.add_argument("--criteria", default=None, help="comma-separated subset, e.g. 1,2,3")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
