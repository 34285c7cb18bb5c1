"""Profile functionals, asymptotic-law reports and the gamma sweep.

Quadratures run in ``x = ln r`` on the profile's own step grid, where
``u'(r)^2 r dr = (du/dx)^2 dx`` and ``u^2 r dr = e^{2x} u^2 dx``. The part of
the disk below the series start is added from the Taylor seed.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np

from . import bubble
from .nonlinearity import scaled_f
from .quadrature import integrate
from .radial_ode import RadialProfile
from .shooting import (
    ShootingError,
    ShootingResult,
    TheoremOneConfig,
    solve_gtype,
    solve_nodal,
    solve_theorem1,
)
from .special_functions import eigen_data

__all__ = [
    "DiagnosticsReport",
    "CSV_COLUMNS",
    "dirichlet_energy",
    "l2_norm",
    "identity_rhs",
    "weak_limit_deviation",
    "predicted_limit",
    "energy_target",
    "pde_residual",
    "report",
    "sweep",
    "sweep_csv",
    "solve",
]

QUAD_TOL = 1e-11
DELTA_OUT = 0.2
CSV_COLUMNS = (
    "gamma",
    "lambda_bar",
    "log_beta",
    "beta",
    "R_residual",
    "energy",
    "energy_residual",
    "l2_norm",
    "beta_law_ratio",
    "weak_dev",
    "gap_law_ratio",
    "inner_res",
    "mid_res",
    "status",
)


def _breaks(profile: RadialProfile, x_hi: float) -> np.ndarray:
    xg = profile.x_grid
    inner = xg[(xg > xg[0]) & (xg < x_hi)]
    return np.concatenate([[xg[0]], inner, [x_hi]])


def _upper(profile: RadialProfile) -> float:
    x_hi = min(0.0, profile.x_end)
    if profile.x_end < -1e-8:
        raise ValueError(f"profile stops at r={math.exp(profile.x_end):.6g} < 1")
    return x_hi


def dirichlet_energy(profile: RadialProfile, rtol: float = QUAD_TOL) -> float:
    """``2 pi int_0^1 u'(r)^2 r dr`` (computed as ``2 pi int (du/dx)^2 dx``)."""
    x_hi = _upper(profile)
    body = integrate(lambda x: profile.deficit(x, deriv=1) ** 2, _breaks(profile, x_hi), rtol=rtol)
    # seed region: w_x = F e^{2x} / 2
    tail = math.exp(2.0 * profile.log_f_gamma + 4.0 * profile.x_start) / 16.0
    return 2.0 * math.pi * (body + tail)


def l2_norm(profile: RadialProfile, rtol: float = QUAD_TOL) -> float:
    x_hi = _upper(profile)
    g = profile.gamma
    body = integrate(
        lambda x: np.exp(2.0 * x) * (g - profile.deficit(x)) ** 2, _breaks(profile, x_hi), rtol=rtol
    )
    tail = 0.5 * g * g * math.exp(2.0 * profile.x_start)
    return math.sqrt(2.0 * math.pi * (body + tail))


def identity_rhs(profile: RadialProfile, rtol: float = QUAD_TOL) -> float:
    """``2 pi int_0^1 u f(u) r dr``; equals the Dirichlet energy for solutions vanishing at r = 1."""
    x_hi = _upper(profile)
    g = profile.gamma
    spec = profile.spec

    def integrand(x):
        u = g - profile.deficit(x)
        return u * scaled_f(spec, 2.0 * x, u)

    tail = 0.5 * g * math.exp(profile.log_f_gamma + 2.0 * profile.x_start)
    return 2.0 * math.pi * (integrate(integrand, _breaks(profile, x_hi), rtol=rtol) + tail)


def weak_limit_deviation(profile: RadialProfile, predicted: Callable, delta_out: float = DELTA_OUT) -> float:
    """``sup |u - predicted|`` over grid radii in ``[delta_out, 1]``."""
    if not 0.0 < delta_out < 1.0:
        raise ValueError("delta_out must lie in (0, 1)")
    r = profile.r_grid
    mask = (r >= delta_out) & (r <= 1.0)
    r = np.concatenate([[delta_out], r[mask], [min(1.0, math.exp(profile.x_end))]])
    return float(np.max(np.abs(profile.u_at(r) - predicted(r))))


def predicted_limit(result: ShootingResult) -> Callable:
    """Weak limit ``u_inf``: ``v_k sqrt(l / lambda_k)`` or ``(a / (2 v_1(0))) v_1``."""
    if result.problem == "gtype":
        e1 = eigen_data(1)
        c = result.a / (2.0 * e1.norm_c)
        return lambda r: c * e1.v(r)
    ek = eigen_data(result.k)
    c = math.sqrt(result.l / ek.lambda_k)
    return lambda r: c * ek.v(r)


def energy_target(result: ShootingResult) -> float:
    if result.problem == "gtype":
        e1 = eigen_data(1)
        return 4.0 * math.pi + result.a ** 2 * e1.lambda_k / (4.0 * e1.norm_c ** 2)
    return 4.0 * math.pi + result.l


def l2_target(result: ShootingResult) -> float:
    if result.problem == "gtype":
        return result.a / (2.0 * eigen_data(1).norm_c)
    return math.sqrt(result.l / eigen_data(result.k).lambda_k)


def pde_residual(result: ShootingResult, r_lo: float | None = None, r_hi: float = 0.9, n: int = 400, h: float = 1e-2):
    """Finite-difference residual of ``u'' + u'/r + f(u)`` on ``[r_lo, r_hi]``.

    Uses a five-point stencil in ``x`` on the dense output, so
    ``u'' + u'/r = e^{-2x} v_xx``. Default ``r_lo = 10 rho_gamma``. Below
    ``h ~ 5e-3`` round-off in ``v`` dominates the stencil; above it the
    dense-output error sets a floor, so ``h = 1e-2`` sits between the two.
    Returns ``(max |residual|, max |f(u)|)`` over the window.
    """
    prof = result.profile
    if r_lo is None:
        r_lo = 10.0 * bubble.scales_for(result).rho
    x = np.linspace(math.log(r_lo), math.log(r_hi), n)
    v = lambda xx: prof.gamma - prof.deficit(xx)  # noqa: E731
    vxx = (-v(x + 2 * h) + 16 * v(x + h) - 30 * v(x) + 16 * v(x - h) - v(x - 2 * h)) / (12 * h * h)
    ef = scaled_f(prof.spec, 2.0 * x, v(x))
    res = np.abs(vxx + ef) * np.exp(-2.0 * x)
    f = np.abs(ef) * np.exp(-2.0 * x)
    return float(res.max()), float(f.max())


@dataclass
class DiagnosticsReport:
    problem: str
    gamma: float
    lambda_bar: float | None = None
    log_beta: float | None = None
    beta: float | None = None
    R_residual: float | None = None
    dirichlet_energy: float | None = None
    identity_rhs: float | None = None
    l2_norm: float | None = None
    energy_target: float | None = None
    energy_residual: float | None = None
    l2_target: float | None = None
    beta_law_ratio: float | None = None
    weak_limit_dev: float | None = None
    gap_law_ratio: float | None = None
    r_k_gamma: float | None = None
    tau_dev: float | None = None
    second_order_dev: float | None = None
    second_order_dev_plus: float | None = None
    inner_res: float | None = None
    mid_res: float | None = None
    mass: float | None = None
    mass_flux: float | None = None
    status: str = "ok"

    def csv_row(self) -> list[str]:
        vals = {
            "gamma": self.gamma,
            "lambda_bar": self.lambda_bar,
            "log_beta": self.log_beta,
            "beta": self.beta,
            "R_residual": self.R_residual,
            "energy": self.dirichlet_energy,
            "energy_residual": self.energy_residual,
            "l2_norm": self.l2_norm,
            "beta_law_ratio": self.beta_law_ratio,
            "weak_dev": self.weak_limit_dev,
            "gap_law_ratio": self.gap_law_ratio,
            "inner_res": self.inner_res,
            "mid_res": self.mid_res,
        }
        row = ["" if vals[c] is None else f"{vals[c]:.17g}" for c in CSV_COLUMNS[:-1]]
        return row + [self.status]

    def to_dict(self) -> dict:
        return asdict(self)


def report(result: ShootingResult, quad_tol: float = QUAD_TOL) -> DiagnosticsReport:
    prof = result.profile
    e1 = eigen_data(1)
    energy = dirichlet_energy(prof, quad_tol)
    target = energy_target(result)
    rep = DiagnosticsReport(
        problem=result.problem,
        gamma=result.gamma,
        lambda_bar=result.lambda_bar if result.problem != "gtype" else None,
        log_beta=result.log_beta,
        beta=result.beta,
        R_residual=result.boundary_residual,
        dirichlet_energy=energy,
        identity_rhs=identity_rhs(prof, quad_tol),
        l2_norm=l2_norm(prof, quad_tol),
        energy_target=target,
        energy_residual=abs(energy - target),
        l2_target=l2_target(result),
        weak_limit_dev=weak_limit_deviation(prof, predicted_limit(result)),
        tau_dev=bubble.tau_deviation(result),
        mass=bubble.centered_mass(result),
        mass_flux=bubble.centered_mass_flux(result),
    )
    if result.problem == "t1":
        rep.beta_law_ratio = (-result.log_beta / result.gamma) / (e1.norm_c * math.sqrt(result.l / e1.lambda_k))
    if result.problem in ("t1", "nodal"):
        rep.inner_res = bubble.inner_residual_t1(result).max_residual
    if result.problem == "nodal":
        ek = eigen_data(result.k)
        rep.gap_law_ratio = (ek.lambda_k - result.lambda_bar) * result.gamma / (
            4.0 * math.pi * ek.norm_c * math.sqrt(ek.lambda_k / result.l)
        )
        rep.r_k_gamma = result.r_k_gamma
    if result.problem == "gtype":
        rep.second_order_dev = bubble.second_order_deviation(result, result.a)
        rep.second_order_dev_plus = bubble.second_order_deviation(result, result.a, sign=1.0)
        try:
            inner, mid = bubble.inner_residual_gtype(result, result.a)
            rep.inner_res, rep.mid_res = inner.max_residual, mid.max_residual
        except ValueError:
            pass
    return rep


def solve(problem: str, gamma: float, params: dict, tols: dict | None = None) -> ShootingResult:
    tols = tols or {}
    ode_tol = tols.get("ode_tol", 1e-12)
    tol_R = tols.get("shoot_tol_R", 1e-10)
    if problem == "t1":
        return solve_theorem1(TheoremOneConfig(params["l"], gamma), tol_R=tol_R, ode_tol=ode_tol)
    if problem == "nodal":
        return solve_nodal(params["l"], params["k"], gamma, tol_R=tol_R, ode_tol=ode_tol)
    if problem == "gtype":
        return solve_gtype(params["a"], gamma, g_variant=params.get("g_variant", "constant"), ode_tol=ode_tol)
    raise ValueError(f"unknown problem {problem!r}")


def _solve_and_report(args) -> tuple[DiagnosticsReport, ShootingResult | None]:
    problem, gamma, params, tols = args
    try:
        res = solve(problem, gamma, params, tols)
        return report(res, (tols or {}).get("quad_tol", QUAD_TOL)), res
    except (ShootingError, ArithmeticError, RuntimeError, ValueError) as exc:
        return DiagnosticsReport(problem=problem, gamma=gamma, status=f"failed: {exc}"), None


def sweep(
    problem: str,
    params: dict,
    gamma_list: Iterable[float],
    tols: dict | None = None,
    workers: int = 1,
    keep_results: bool = False,
):
    """Solve and report for each gamma (ascending); failures become flagged rows."""
    gammas = [float(g) for g in gamma_list]
    if gammas != sorted(gammas):
        raise ValueError("gamma_list must be ascending")
    jobs = [(problem, g, dict(params), dict(tols or {})) for g in gammas]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(_solve_and_report, jobs))
    else:
        out = [_solve_and_report(j) for j in jobs]
    reports = [o[0] for o in out]
    if keep_results:
        return reports, [o[1] for o in out]
    return reports


def sweep_csv(reports: Iterable[DiagnosticsReport]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_COLUMNS)
    for rep in reports:
        wr.writerow(rep.csv_row())
    return buf.getvalue()
