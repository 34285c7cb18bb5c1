"""Acceptance criteria shared by ``verify`` and the test-suite.

Every criterion returns a list of :class:`Check` rows; a criterion passes when
all of its rows pass. Sweeps are run once per :class:`AcceptanceRun` and
reused by the criteria that inspect the same profiles.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bubble, diagnostics, special_functions
from .nonlinearity import adimurthi_druet
from .quadrature import integrate as quad
from .radial_ode import integrate
from .shooting import TheoremOneConfig, solve_gtype
from .special_functions import bessel_j0, bessel_zero, eigen_data, oracle_zero, vbar1

__all__ = ["Check", "AcceptanceRun", "SWEEPS", "strictly_decreasing"]

T1_GAMMAS = (6.0, 8.0, 10.0, 12.0)
NODAL_GAMMAS = (8.0, 10.0, 12.0)
GTYPE_GAMMAS = (6.0, 9.0, 12.0)
SWEEPS = {
    "t1": ("t1", {"l": 1.0}, T1_GAMMAS),
    "nodal": ("nodal", {"l": 1.0, "k": 2}, NODAL_GAMMAS),
    "gtype": ("gtype", {"a": 2.0}, GTYPE_GAMMAS),
}
RUNTIME = {1: 1.0, 2: 5.0, 3: 60.0, 5: 90.0, 6: 60.0}


@dataclass
class Check:
    criterion: int
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] C{self.criterion} {self.name}: {self.detail}"


def strictly_decreasing(values) -> bool:
    v = list(values)
    return len(v) >= 2 and all(b < a for a, b in zip(v, v[1:]))


def _fmt(values) -> str:
    return "[" + ", ".join("nan" if v is None else f"{v:.4g}" for v in values) + "]"


def _trend(criterion: int, name: str, values, expected: int) -> Check:
    ok = len(values) == expected and None not in values and strictly_decreasing(values)
    return Check(criterion, name, ok, _fmt(values) + ("" if len(values) == expected else f" ({len(values)}/{expected} solved)"))


@dataclass
class AcceptanceRun:
    tols: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def sweep(self, key: str):
        if key not in self.sweeps:
            problem, params, gammas = SWEEPS[key]
            t0 = time.perf_counter()
            reports, results = diagnostics.sweep(problem, params, gammas, self.tols, keep_results=True)
            self.timings[key] = time.perf_counter() - t0
            self.sweeps[key] = (reports, results)
        return self.sweeps[key]

    def csv(self, key: str) -> str:
        return diagnostics.sweep_csv(self.sweep(key)[0])

    # 1 ---------------------------------------------------------------
    def criterion1(self) -> list[Check]:
        special_functions.bessel_zero.cache_clear()
        special_functions.eigen_data.cache_clear()
        t0 = time.perf_counter()
        zeros = [bessel_zero(k) for k in (1, 2, 3)]
        e1 = eigen_data(1)
        c, j = e1.norm_c, e1.j0k
        norm = 2.0 * math.pi * quad(lambda r: (c * bessel_j0(j * r)) ** 2 * r, [0.0, 1.0], rtol=1e-13)
        elapsed = time.perf_counter() - t0
        out = []
        for k, z in zip((1, 2, 3), zeros):
            d = abs(z - oracle_zero(k))
            out.append(Check(1, f"j0,{k} vs oracle", d <= 1e-12, f"|diff| = {d:.2e}"))
        out.append(Check(1, "v1 normalisation", abs(norm - 1.0) <= 1e-10, f"|norm - 1| = {abs(norm - 1):.2e}"))
        out.append(Check(1, "runtime", elapsed < RUNTIME[1], f"{elapsed:.3f} s < {RUNTIME[1]} s"))
        return out

    # 2 ---------------------------------------------------------------
    def criterion2(self) -> list[Check]:
        t0 = time.perf_counter()
        e1 = eigen_data(1)
        lin = adimurthi_druet(e1.lambda_k, -math.inf)
        prof = integrate(lin, 1.0, 3.0)
        r = np.concatenate([prof.r_grid[prof.r_grid <= 3.0], np.linspace(1e-3, 3.0, 3001)])
        sup = float(np.max(np.abs(prof.u_at(r) - vbar1(r) / e1.norm_c)))
        out = [Check(2, "eigen round-trip on [0,3]", sup <= 1e-8, f"sup error {sup:.2e}")]
        tol = 1e-10
        cfg = TheoremOneConfig(1.0, 6.0)
        nonlin = adimurthi_druet(cfg.lambda_bar, -6.0 * e1.norm_c / math.sqrt(e1.lambda_k))
        for label, spec, g in (("linear", lin, 1.0), ("nonlinear gamma=6", nonlin, 6.0)):
            u_a = float(integrate(spec, g, 1.5, tol=tol).u_at(1.0))
            u_b = float(integrate(spec, g, 1.5, tol=tol / 2).u_at(1.0))
            d = abs(u_a - u_b)
            out.append(Check(2, f"self-convergence ({label})", d <= 50 * tol, f"|du(1)| = {d:.2e} <= {50 * tol:.0e}"))
        elapsed = time.perf_counter() - t0
        out.append(Check(2, "runtime", elapsed < RUNTIME[2], f"{elapsed:.3f} s < {RUNTIME[2]} s"))
        return out

    # 3 ---------------------------------------------------------------
    def criterion3(self) -> list[Check]:
        reports, _ = self.sweep("t1")
        ok = [r for r in reports if r.status == "ok"]
        n = len(T1_GAMMAS)
        out = [Check(3, "all solves accepted", len(ok) == n, f"{len(ok)}/{n}")]
        res = [r.R_residual / r.gamma for r in ok]
        out.append(Check(3, "|u(1)| <= 1e-10 gamma", bool(ok) and max(res) <= 1e-10, f"max |u(1)|/gamma = {max(res, default=math.nan):.2e}"))
        ident = [abs(r.identity_rhs / r.dirichlet_energy - 1.0) for r in ok]
        out.append(Check(3, "energy identity", bool(ok) and max(ident) <= 1e-7, f"max rel. error {max(ident, default=math.nan):.2e}"))
        e_res = [r.energy_residual for r in ok]
        out.append(_trend(3, "|energy - 13.56637| decreasing", e_res, n))
        out.append(Check(3, "energy residual < 1 at gamma=12", bool(ok) and ok[-1].gamma == 12.0 and e_res[-1] < 1.0, f"{e_res[-1] if ok else math.nan:.4g}"))
        out.append(_trend(3, "|l2 - 0.41583| decreasing", [abs(r.l2_norm - r.l2_target) for r in ok], n))
        dev = [abs(r.beta_law_ratio - 1.0) for r in ok]
        out.append(_trend(3, "|beta_law_ratio - 1| decreasing", dev, n))
        out.append(Check(3, "|beta_law_ratio - 1| smaller at 12 than at 6", len(dev) == n and dev[-1] < dev[0], "ratios " + _fmt([r.beta_law_ratio for r in ok])))
        out.append(_trend(3, "beta decreasing", [r.beta for r in ok], n))
        t = self.timings["t1"]
        out.append(Check(3, "runtime", t < RUNTIME[3], f"{t:.1f} s < {RUNTIME[3]} s"))
        return out

    # 4 ---------------------------------------------------------------
    def criterion4(self) -> list[Check]:
        reports, _ = self.sweep("t1")
        ok = [r for r in reports if r.status == "ok"]
        n = len(T1_GAMMAS)
        out = [_trend(4, "sup |tau - T0| decreasing", [r.tau_dev for r in ok], n)]
        inner = {r.gamma: r.inner_res for r in ok}
        ratio = inner.get(12.0, math.nan) / inner.get(6.0, math.nan)
        out.append(Check(4, "inner residual ratio gamma 12/6 <= 3", ratio <= 3.0, f"C(6)={inner.get(6.0, math.nan):.4g}, C(12)={inner.get(12.0, math.nan):.4g}, ratio {ratio:.3g}"))
        return out

    # 5 ---------------------------------------------------------------
    def criterion5(self) -> list[Check]:
        reports, results = self.sweep("nodal")
        n = len(NODAL_GAMMAS)
        pairs = [(rep, res) for rep, res in zip(reports, results) if res is not None]
        failed = [f"gamma={rep.gamma:g}: {rep.status}" for rep in reports if rep.status != "ok"]
        out = [Check(5, "all solves accepted", not failed, "; ".join(failed) or f"{n}/{n}")]
        regions = []
        for _, res in pairs:
            u = res.profile.u_at(np.linspace(1e-6, 1.0 - 1e-9, 20001))
            regions.append(int(np.count_nonzero(np.diff(np.sign(u)) != 0)) + 1)
        out.append(Check(5, "exactly 2 nodal regions", len(pairs) == n and all(k == 2 for k in regions), f"regions {regions}"))
        r2 = eigen_data(2).r_k
        out.append(_trend(5, "|r_2,gamma - r_2| decreasing", [abs(rep.r_k_gamma - r2) for rep, _ in pairs], n))
        out.append(_trend(5, "|gap_law_ratio - 1| decreasing", [abs(rep.gap_law_ratio - 1.0) for rep, _ in pairs], n))
        out.append(_trend(5, "|energy - (4 pi + 1)| decreasing", [rep.energy_residual for rep, _ in pairs], n))
        t = self.timings["nodal"]
        out.append(Check(5, "runtime", t < RUNTIME[5], f"{t:.1f} s < {RUNTIME[5]} s"))
        return out

    # 6 ---------------------------------------------------------------
    def criterion6(self) -> list[Check]:
        t0 = time.perf_counter()
        a = 2.0
        e1 = eigen_data(1)
        anchor = solve_gtype(a, a / 2.0, ode_tol=self.tols.get("ode_tol", 1e-12))
        self._anchor = anchor
        d_beta = abs(anchor.beta - e1.lambda_k)
        r = np.concatenate([anchor.profile.r_grid[anchor.profile.r_grid <= 1.0], np.linspace(0.0, 1.0, 2001)[1:]])
        prof_err = float(np.max(np.abs(anchor.profile.u_at(r) - a / (2.0 * e1.norm_c) * e1.v(r))))
        out = [
            Check(6, "anchor beta = lambda_1", d_beta <= 1e-8, f"|beta - lambda_1| = {d_beta:.2e}"),
            Check(6, "anchor profile = (a/(2 v1(0))) v1", prof_err <= 1e-8, f"sup error {prof_err:.2e}"),
        ]
        t_anchor = time.perf_counter() - t0
        reports, _ = self.sweep("gtype")
        ok = [rep for rep in reports if rep.status == "ok"]
        n = len(GTYPE_GAMMAS)
        out.append(Check(6, "all solves accepted", len(ok) == n, f"{len(ok)}/{n}"))
        out.append(_trend(6, "|beta - lambda_1| decreasing", [abs(rep.beta - e1.lambda_k) for rep in ok], n))
        out.append(_trend(6, "|energy - 17.4630| decreasing", [rep.energy_residual for rep in ok], n))
        out.append(_trend(6, "sup |gamma(tau - T0) - 2 S0| decreasing", [rep.second_order_dev_plus for rep in ok], n))
        out.append(_trend(6, "sup |gamma(tau - T0) + 2 S0| decreasing", [rep.second_order_dev for rep in ok], n))
        scaled = [abs(rep.mass - 4 * math.pi / rep.gamma - 2 * math.pi * a / rep.gamma ** 2) * rep.gamma ** 3 for rep in ok]
        bounded = len(scaled) == n and max(scaled) <= 3.0 * scaled[0]
        out.append(Check(6, "mass law scaled residual bounded (max <= 3x first)", bounded, _fmt(scaled)))
        t = t_anchor + self.timings["gtype"]
        out.append(Check(6, "runtime", t < RUNTIME[6], f"{t:.1f} s < {RUNTIME[6]} s"))
        return out

    # 7 ---------------------------------------------------------------
    def criterion7(self) -> list[Check]:
        out = []
        for key in ("t1", "nodal", "gtype"):
            _, results = self.sweep(key)
            for res in results:
                if res is None:
                    continue
                r_lo = 10.0 * bubble.scales_for(res).rho
                if r_lo >= 0.9:
                    continue
                resid, fmax = diagnostics.pde_residual(res, r_lo=r_lo)
                out.append(
                    Check(7, f"{key} gamma={res.gamma:g}", resid <= 1e-5 * fmax, f"residual {resid:.3g} vs 1e-5 max|f| = {1e-5 * fmax:.3g}")
                )
        if not out:
            out.append(Check(7, "accepted profiles", False, "no accepted profile to check"))
        return out

    # 8 ---------------------------------------------------------------
    def criterion8(self) -> list[Check]:
        out = []
        for key in SWEEPS:
            first = self.csv(key)
            problem, params, gammas = SWEEPS[key]
            again = diagnostics.sweep_csv(diagnostics.sweep(problem, params, gammas, self.tols))
            out.append(Check(8, f"{key} CSV byte-identical", first == again, f"{len(first.encode())} bytes"))
        return out

    def run(self, criteria=range(1, 9)) -> dict[int, list[Check]]:
        return {c: getattr(self, f"criterion{c}")() for c in criteria}
