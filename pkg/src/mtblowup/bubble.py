"""Bubble scales, the Liouville profile T0, the corrector S0 and inner-expansion residuals.

All scale arithmetic is done on logarithms: ``mu`` is ~1e-31 at gamma = 12
and underflows double precision beyond gamma ~ 26.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .nonlinearity import ADIMURTHI_DRUET, log_g, scaled_f
from .quadrature import integrate
from .shooting import ShootingResult

__all__ = [
    "BubbleScales",
    "ResidualReport",
    "T0",
    "S0",
    "scales_for",
    "tau",
    "tau_deviation",
    "second_order_deviation",
    "inner_residual_t1",
    "inner_residual_gtype",
    "centered_mass",
    "centered_mass_flux",
]

Y_WINDOW = 10.0


def T0(y):
    """Standard Liouville bubble ``log(1 + y^2)``."""
    y = np.asarray(y, dtype=float)
    return np.log1p(y * y)


def S0(y):
    """Second-order corrector ``-T0/2 + y^2 / (2 (1 + y^2))``."""
    y = np.asarray(y, dtype=float)
    y2 = y * y
    return -0.5 * np.log1p(y2) + 0.5 * y2 / (1.0 + y2)


@dataclass(frozen=True)
class BubbleScales:
    gamma: float
    variant: str
    log_mu: float
    log_rho: float
    log_rho1: float

    @property
    def mu(self) -> float:
        return math.exp(self.log_mu)

    @property
    def rho(self) -> float:
        return math.exp(self.log_rho)

    @property
    def rho1(self) -> float:
        return math.exp(self.log_rho1)

    def t(self, r):
        """``t_gamma(r) = T0(r / mu)`` evaluated without forming ``mu``."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            z = 2.0 * (np.log(r) - self.log_mu)
        return np.logaddexp(0.0, z)


def _log_expm1(z: float) -> float:
    return z + math.log(-math.expm1(-z)) if z > 1 else math.log(math.expm1(z))


def scales_for(result: ShootingResult) -> BubbleScales:
    g = result.gamma
    spec = result.spec
    if spec.variant == ADIMURTHI_DRUET:
        log_growth = g * g
    else:
        log_growth = log_g(spec, g)
    log_mu = 0.5 * (math.log(4.0) - spec.log_beta - 2.0 * math.log(g) - log_growth)
    return BubbleScales(
        gamma=g,
        variant=spec.variant,
        log_mu=log_mu,
        log_rho=log_mu + 0.5 * _log_expm1(0.5 * g * g),
        log_rho1=log_mu + 0.5 * _log_expm1(g),
    )


@dataclass(frozen=True)
class ResidualReport:
    window: tuple[float, float]
    max_residual: float
    argmax_r: float
    gamma: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def _window_points(result: ShootingResult, r_lo: float, r_hi: float, extra: int = 2000) -> np.ndarray:
    """Native grid inside the window plus a log-uniform fill (the grid is sparse in the core)."""
    prof = result.profile
    x_lo, x_hi = math.log(r_lo) if r_lo > 0 else prof.x_start, math.log(r_hi)
    xg = prof.x_grid[(prof.x_grid >= x_lo) & (prof.x_grid <= x_hi)]
    fill = np.linspace(x_lo, x_hi, extra)
    return np.unique(np.concatenate([xg, fill]))


def tau(result: ShootingResult, y, scales: BubbleScales | None = None):
    """``tau_gamma(y) = gamma (gamma - u(mu y))``; ``tau(0) = 0``."""
    sc = scales or scales_for(result)
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = result.gamma * result.profile.deficit(sc.log_mu + np.log(y[pos]))
    return out


def tau_deviation(result: ShootingResult, y_max: float = Y_WINDOW, n: int = 2001) -> float:
    """``sup_{0 <= y <= y_max} |tau_gamma(y) - T0(y)|``."""
    y = np.linspace(0.0, y_max, n)
    return float(np.max(np.abs(tau(result, y) - T0(y))))


def second_order_deviation(
    result: ShootingResult, a: float, sign: float = -1.0, y_max: float = Y_WINDOW, n: int = 2001
) -> float:
    """``sup_{0 <= y <= y_max} |gamma (tau_gamma - T0) - sign * a * S0|``.

    With ``u = gamma - t/gamma + a S/gamma^2`` and ``u(mu y) = gamma - tau/gamma``
    the first correction of ``tau`` is ``-a S0 / gamma``, hence ``sign = -1`` by
    default. ``sign = +1`` measures the distance to ``+a S0``.
    """
    y = np.linspace(0.0, y_max, n)
    return float(np.max(np.abs(result.gamma * (tau(result, y) - T0(y)) - sign * a * S0(y))))


def inner_residual_t1(result: ShootingResult, R_window: float = math.inf) -> ResidualReport:
    """Scaled deviation from ``gamma - t/gamma`` on ``r <= min(R_window, rho)``.

    Returns the sup of ``|u - (gamma - t/gamma)| gamma^3 / (1 + t)``: an
    empirical value for the constant in the first-order inner expansion.
    """
    sc = scales_for(result)
    g = result.gamma
    r_hi = min(R_window, sc.rho, math.exp(result.profile.x_end))
    if r_hi <= math.exp(result.profile.x_start):
        raise ValueError("inner window is empty")
    x = _window_points(result, 0.0, r_hi)
    r = np.exp(x)
    t = sc.t(r)
    w = result.profile.deficit(x)
    e = np.abs(t / g - w) * g ** 3 / (1.0 + t)
    i = int(np.argmax(e))
    return ResidualReport((0.0, r_hi), float(e[i]), float(r[i]), g)


def _radius_where_u_equals(result: ShootingResult, level: float) -> float:
    prof = result.profile
    u = prof.u_vals
    idx = np.nonzero(u <= level)[0]
    if idx.size == 0 or idx[0] == 0:
        raise ValueError(f"u never drops to {level}")
    i = int(idx[0])
    lo, hi = float(prof.x_grid[i - 1]), float(prof.x_grid[i])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if prof.gamma - prof.deficit(mid) > level:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def inner_residual_gtype(result: ShootingResult, a: float) -> tuple[ResidualReport, ResidualReport]:
    """Second-order inner report on ``[0, rho]`` and mid-range report on ``[rho, r_gamma]``.

    inner: ``|u - (gamma - t/gamma + a S0(r/mu)/gamma^2)| gamma^3 / max(t, 1)``;
    mid:   ``|u - (gamma - (t/gamma)(1 + a/(2 gamma)))| gamma^2 / t``
    where ``u(r_gamma) = max(c0, a/2) + 1``.
    """
    sc = scales_for(result)
    g = result.gamma
    prof = result.profile
    if sc.rho <= math.exp(prof.x_start) or sc.rho >= 1.0:
        raise ValueError("inner window is empty (gamma too small)")
    x = _window_points(result, 0.0, sc.rho)
    r = np.exp(x)
    t = sc.t(r)
    y = np.exp(x - sc.log_mu)
    w = prof.deficit(x)
    e = np.abs(t / g - a * S0(y) / g ** 2 - w) * g ** 3 / np.maximum(t, 1.0)
    i = int(np.argmax(e))
    inner = ResidualReport((0.0, sc.rho), float(e[i]), float(r[i]), g)

    c1 = max(result.spec.c0, 0.5 * a) + 1.0
    r_g = _radius_where_u_equals(result, c1)
    if r_g <= sc.rho:
        raise ValueError("mid window is empty (gamma too small)")
    x = _window_points(result, sc.rho, r_g)
    r = np.exp(x)
    t = sc.t(r)
    w = prof.deficit(x)
    e = np.abs((t / g) * (1.0 + a / (2.0 * g)) - w) * g ** 2 / t
    i = int(np.argmax(e))
    mid = ResidualReport((sc.rho, r_g), float(e[i]), float(r[i]), g)
    return inner, mid


def centered_mass(result: ShootingResult, radius: float | None = None, rtol: float = 1e-10) -> float:
    """``2 pi int_0^radius f(u) r dr`` by quadrature (default radius ``rho_1``)."""
    prof = result.profile
    sc = scales_for(result)
    x_hi = sc.log_rho1 if radius is None else math.log(radius)
    spec = prof.spec

    def integrand(x):
        return scaled_f(spec, 2.0 * x, prof.gamma - prof.deficit(x))

    breaks = np.concatenate([[prof.x_start - 30.0], prof.x_grid[(prof.x_grid > prof.x_start - 30) & (prof.x_grid < x_hi)], [x_hi]])
    return 2.0 * math.pi * integrate(integrand, breaks, rtol=rtol)


def centered_mass_flux(result: ShootingResult, radius: float | None = None) -> float:
    """Same mass through the flux identity ``2 pi int_0^r f(u) s ds = -2 pi r u'(r)``."""
    sc = scales_for(result)
    x = sc.log_rho1 if radius is None else math.log(radius)
    return 2.0 * math.pi * float(result.profile.deficit(x, deriv=1))
