"""Run the three families over a wider gamma range and write one CSV per family.

The acceptance ranges stop at gamma = 12; this pushes towards the 64-bit
ceiling (~25) to show where each trend settles.

Example:
  python3 scripts/extended_sweeps.py --outdir out_sweeps
"""
import argparse
import json
from pathlib import Path

from mtblowup import diagnostics

RUNS = {
    "t1": ({"l": 1.0}, [6, 8, 10, 12, 14, 16, 18, 20, 22, 24]),
    "nodal": ({"l": 1.0, "k": 2}, [8, 10, 12, 14, 16, 18, 20, 22, 24]),
    "gtype": ({"a": 2.0}, [3, 6, 9, 12, 15, 18, 21, 24]),
}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="out_sweeps")
    ap.add_argument("--only", choices=sorted(RUNS), default=None)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    outp = Path(args.outdir)
    outp.mkdir(parents=True, exist_ok=True)
    for name, (params, gammas) in RUNS.items():
        if args.only and name != args.only:
            continue
        reports = diagnostics.sweep(name, params, gammas, workers=args.workers)
        (outp / f"{name}.csv").write_text(diagnostics.sweep_csv(reports))
        full = [r.to_dict() for r in reports]
        (outp / f"{name}_full.json").write_text(json.dumps(full, indent=1))
        for r in reports:
            if r.status != "ok":
                print(f"{name} gamma={r.gamma:g}: {r.status}")
                continue
            extra = ""
            if r.beta_law_ratio is not None:
                extra += f" beta_law={r.beta_law_ratio:.4f}"
            if r.gap_law_ratio is not None:
                extra += f" gap_law={r.gap_law_ratio:.4f} r_kg={r.r_k_gamma:.5f}"
            if r.second_order_dev is not None:
                extra += f" second_order={r.second_order_dev:.4f}"
            print(f"{name} gamma={r.gamma:g}: energy_res={r.energy_residual:.4f} l2={r.l2_norm:.5f} weak_dev={r.weak_limit_dev:.4f}{extra}")
    print("Wrote", outp)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
