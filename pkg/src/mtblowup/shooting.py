"""Shooting solvers for the three blow-up families on the unit disk.

* ``solve_theorem1``: positive solutions of ``Delta u = lambda_bar u + beta u e^{u^2}``
  with ``lambda_bar = lambda_1 - eps_gamma``; ``log beta`` is bracketed and
  bisected so that the first zero lands on ``r = 1``.
* ``solve_nodal``: a positive solution for ``l / alpha_k`` continued past
  ``r = 1`` to its k-th zero, then rescaled so that zero sits on ``r = 1``.
* ``solve_gtype``: ``Delta w = w g(w)`` with ``beta = 1``; the free first zero
  ``R`` fixes ``beta = R^2`` after rescaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .nonlinearity import NonlinearitySpec, adimurthi_druet, gtype
from .radial_ode import DEFAULT_TOL, IntegrationError, RadialProfile, Zero, integrate
from .special_functions import eigen_data

__all__ = [
    "ConfigurationError",
    "ShootingError",
    "NodalWindowError",
    "ShootingResult",
    "TheoremOneConfig",
    "first_zero_of_beta",
    "solve_theorem1",
    "solve_nodal",
    "solve_gtype",
    "NO_EXP_LOG_BETA",
]

NO_EXP_LOG_BETA = -1e6
MAX_SCAN = 60
MAX_BISECT = 200


class ConfigurationError(ValueError):
    pass


class ShootingError(RuntimeError):
    pass


class NodalWindowError(ShootingError):
    """k-th zero missing from its window: gamma is below the empirical threshold."""


@dataclass(frozen=True)
class TheoremOneConfig:
    l: float
    gamma: float

    @property
    def eps(self) -> float:
        e1 = eigen_data(1)
        return 4.0 * math.pi * e1.norm_c / self.gamma * math.sqrt(e1.lambda_k / self.l)

    @property
    def lambda_bar(self) -> float:
        return eigen_data(1).lambda_k - self.eps

    def validate(self) -> None:
        if not self.l > 0:
            raise ConfigurationError("l must be positive")
        if not self.gamma > 0:
            raise ConfigurationError("gamma must be positive")
        if not self.lambda_bar > 0:
            raise ConfigurationError(
                f"lambda_bar = {self.lambda_bar:.6g} <= 0 for l={self.l}, gamma={self.gamma}; increase gamma"
            )


@dataclass(frozen=True)
class ShootingResult:
    problem: str
    spec: NonlinearitySpec
    gamma: float
    profile: RadialProfile
    R_first: float
    boundary_residual: float
    bracket_trace: tuple[tuple[float, float], ...] = ()
    brackets: tuple[tuple[float, float], ...] = ()
    k_zeros: tuple[Zero, ...] = ()
    l: float | None = None
    k: int = 1
    a: float | None = None
    r_k_gamma: float | None = None
    lambda_tilde: float | None = None

    @property
    def log_beta(self) -> float:
        return self.spec.log_beta

    @property
    def beta(self) -> float:
        return math.exp(self.spec.log_beta)

    @property
    def lambda_bar(self) -> float:
        return self.spec.lambda_bar

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "gamma": self.gamma,
            "lambda_bar": self.lambda_bar if self.problem != "gtype" else None,
            "log_beta": self.log_beta,
            "beta": self.beta,
            "R_first": self.R_first,
            "boundary_residual": self.boundary_residual,
            "zeros": [z.r for z in self.profile.zeros],
            "spec": self.spec.to_dict(),
        }


def _r_cap(lambda_bar: float) -> tuple[float, float]:
    base = math.sqrt(eigen_data(1).lambda_k / lambda_bar)
    return 1.5 * base, 10.0 * base


def _first_zero_profile(spec: NonlinearitySpec, gamma: float, tol: float) -> RadialProfile:
    start, cap = _r_cap(spec.lambda_bar)
    r_max = start
    while True:
        prof = integrate(spec, gamma, r_max, tol=tol, stop_at_zero=1)
        if prof.zeros:
            return prof
        if r_max >= cap:
            raise IntegrationError(f"no zero found up to r={cap:.4g} (log_beta={spec.log_beta})")
        r_max = min(2.0 * r_max, cap)


def first_zero_of_beta(lambda_bar: float, gamma: float, log_beta: float, tol: float = DEFAULT_TOL) -> float:
    """First zero ``R_beta`` of the radial solution with ``u(0) = gamma``."""
    if lambda_bar <= 0:
        raise ConfigurationError("lambda_bar must be positive")
    return _first_zero_profile(adimurthi_druet(lambda_bar, log_beta), gamma, tol).zeros[0].r


def _boundary_value(profile: RadialProfile) -> float:
    return float(profile.u_at(1.0))


def _scan_order(seed: float):
    yield seed
    for j in range(1, MAX_SCAN + 1):
        yield seed + j
        yield seed - j


def solve_theorem1(
    cfg: TheoremOneConfig,
    tol_R: float = 1e-10,
    ode_tol: float = DEFAULT_TOL,
    seed: float | None = None,
) -> ShootingResult:
    cfg.validate()
    e1 = eigen_data(1)
    gamma = cfg.gamma
    base = adimurthi_druet(cfg.lambda_bar, 0.0)
    if seed is None:
        seed = -gamma * e1.norm_c * math.sqrt(cfg.l / e1.lambda_k)

    trace: list[tuple[float, float]] = []
    cache: dict[float, RadialProfile] = {}

    def R_of(lb: float) -> float:
        prof = _first_zero_profile(base.with_log_beta(lb), gamma, ode_tol)
        cache[lb] = prof
        R = prof.zeros[0].r
        trace.append((lb, R))
        return R

    # symmetric outward scan; the first adjacent sign change is the bracket nearest the seed
    values: dict[float, float] = {}
    bracket = None
    brackets: list[tuple[float, float]] = []
    for n, lb in enumerate(_scan_order(seed)):
        R = R_of(lb)
        values[lb] = R
        if R == 1.0:
            bracket = (lb, lb)
            break
        pts = sorted(values)
        for a, b in zip(pts[:-1], pts[1:]):
            if b - a <= 1.0 + 1e-9 and (values[a] > 1.0) != (values[b] > 1.0) and (a, b) not in brackets:
                brackets.append((a, b))
        if brackets:
            bracket = min(brackets, key=lambda ab: abs(0.5 * (ab[0] + ab[1]) - seed))
            break
        if n >= 2 * MAX_SCAN:
            break
    if bracket is None:
        raise ShootingError(f"no sign change of R-1 within {MAX_SCAN} unit steps of log_beta={seed:.4f}")

    lo, hi = bracket
    f_lo = values[lo] - 1.0
    best = min((lo, hi), key=lambda v: abs(values[v] - 1.0))
    for _ in range(MAX_BISECT):
        if abs(values[best] - 1.0) <= tol_R:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            raise ShootingError(f"bisection stagnated at log_beta={mid!r}, |R-1|={abs(values[best] - 1):.3e}")
        R = R_of(mid)
        values[mid] = R
        if abs(R - 1.0) < abs(values[best] - 1.0):
            best = mid
        if (R - 1.0 > 0) == (f_lo > 0):
            lo, f_lo = mid, R - 1.0
        else:
            hi = mid
    else:
        raise ShootingError("bisection did not converge")

    prof = cache[best]
    return ShootingResult(
        problem="t1",
        spec=prof.spec,
        gamma=gamma,
        profile=prof,
        R_first=prof.zeros[0].r,
        boundary_residual=abs(_boundary_value(prof)),
        bracket_trace=tuple(trace),
        brackets=tuple(brackets),
        k_zeros=prof.zeros,
        l=cfg.l,
    )


def solve_nodal(
    l: float,
    k: int,
    gamma: float,
    tol_R: float = 1e-10,
    ode_tol: float = DEFAULT_TOL,
) -> ShootingResult:
    if k < 2:
        raise ConfigurationError("nodal solutions need k >= 2")
    ek = eigen_data(k)
    l_tilde = l / ek.alpha_k
    cfg = TheoremOneConfig(l_tilde, gamma)
    base = solve_theorem1(cfg, tol_R=tol_R, ode_tol=ode_tol)

    r_prev = eigen_data(k - 1).r_k
    r_next = eigen_data(k + 1).r_k
    win_lo = ek.r_k - 0.5 * (ek.r_k - r_prev)
    win_hi = ek.r_k + 0.5 * (r_next - ek.r_k)
    ext = integrate(base.spec, gamma, win_hi, tol=ode_tol, stop_at_zero=k)
    if len(ext.zeros) < k or not win_lo < ext.zeros[k - 1].r < win_hi:
        found = [round(z.r, 6) for z in ext.zeros]
        raise NodalWindowError(
            f"k={k} zero not in ({win_lo:.4f}, {win_hi:.4f}) at gamma={gamma}; zeros found {found}"
        )
    r_kg = ext.zeros[k - 1].r
    spec = base.spec.rescaled(r_kg)
    prof = ext.rescaled(r_kg, spec)
    return ShootingResult(
        problem="nodal",
        spec=spec,
        gamma=gamma,
        profile=prof,
        R_first=prof.zeros[0].r,
        boundary_residual=abs(_boundary_value(prof)),
        bracket_trace=base.bracket_trace,
        brackets=base.brackets,
        k_zeros=prof.zeros[:k],
        l=l,
        k=k,
        r_k_gamma=r_kg,
        lambda_tilde=cfg.lambda_bar,
    )


def solve_gtype(
    a: float,
    gamma: float,
    g_variant: str = "constant",
    c0: float | None = None,
    ode_tol: float = DEFAULT_TOL,
) -> ShootingResult:
    if a <= 0:
        raise ConfigurationError("a must be positive")
    spec1 = gtype(a, 0.0, c0=c0, floor=g_variant)
    # beta < lambda_1 / inf g bounds the free zero: R^2 = beta
    inf_g = min(1.0, math.exp(spec1.c0 * spec1.c0 - a * spec1.c0), math.exp(-0.25 * a * a))
    cap = 10.0 * math.sqrt(eigen_data(1).lambda_k / inf_g)
    w = integrate(spec1, gamma, cap, tol=ode_tol, stop_at_zero=1)
    if not w.zeros:
        raise IntegrationError(f"w_gamma has no zero below r={cap:.4g}")
    R = w.zeros[0].r
    spec = spec1.rescaled(R)
    prof = w.rescaled(R, spec)
    return ShootingResult(
        problem="gtype",
        spec=spec,
        gamma=gamma,
        profile=prof,
        R_first=prof.zeros[0].r,
        boundary_residual=abs(prof.zeros[0].r - 1.0),
        k_zeros=prof.zeros,
        a=a,
    )
