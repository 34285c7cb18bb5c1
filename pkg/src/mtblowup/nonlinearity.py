"""Right-hand sides f(u) of the radial problems, evaluated in the log domain.

Two families are supported:

* ``AdimurthiDruet``: ``f(u) = lambda_bar u + beta u exp(u^2)``;
* ``GType``: ``f(u) = beta u g(|u|)`` (odd extension), with
  ``g(t) = exp(t^2 - a t)`` for ``t >= c0`` and a positive floor below.

``beta`` is carried only through ``log_beta``; the exponential term is always
formed as ``exp(u^2 + log_beta + log|u| [+ extra])`` so that tiny betas and
huge ``exp(u^2)`` never meet as separate floats. ``log_beta = -inf`` turns the
exponential term off.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.special import dawsn

__all__ = [
    "ADIMURTHI_DRUET",
    "GTYPE",
    "EXP_CAP",
    "NonlinearitySpec",
    "OddExtension",
    "OverflowGuardError",
    "adimurthi_druet",
    "gtype",
    "eval_f",
    "eval_g",
    "log_g",
    "log_f",
    "primitive_F",
]

ADIMURTHI_DRUET = "AdimurthiDruet"
GTYPE = "GType"
EXP_CAP = 700.0
FLOORS = ("constant", "ramp")


class OverflowGuardError(OverflowError):
    pass


def _overflow(exponent: float) -> OverflowGuardError:
    return OverflowGuardError(
        f"log-domain exponent {exponent:.1f} exceeds {EXP_CAP}: gamma too large for 64-bit mode"
    )


@dataclass(frozen=True)
class NonlinearitySpec:
    variant: str
    lambda_bar: float = 0.0
    log_beta: float = 0.0
    a: float | None = None
    c0: float | None = None
    g_floor: str = "constant"

    def __post_init__(self):
        if self.variant not in (ADIMURTHI_DRUET, GTYPE):
            raise ValueError(f"unknown variant {self.variant!r}")
        if math.isnan(self.log_beta) or self.log_beta == math.inf:
            raise ValueError("log_beta must be finite or -inf")
        if self.variant == ADIMURTHI_DRUET:
            if self.lambda_bar < 0:
                raise ValueError("lambda_bar must be >= 0")
        else:
            if self.a is None or self.a <= 0:
                raise ValueError("GType needs a > 0")
            if self.c0 is None:
                object.__setattr__(self, "c0", float(self.a))
            if self.c0 <= 0:
                raise ValueError("c0 must be > 0")
            if self.g_floor not in FLOORS:
                raise ValueError(f"g_floor must be one of {FLOORS}")

    @property
    def beta(self) -> float:
        return math.exp(self.log_beta)

    def with_log_beta(self, log_beta: float) -> "NonlinearitySpec":
        return replace(self, log_beta=float(log_beta))

    def rescaled(self, factor: float) -> "NonlinearitySpec":
        """Coefficients of f for ``u(factor * r)``: lambda_bar and beta pick up ``factor**2``."""
        return replace(
            self,
            lambda_bar=self.lambda_bar * factor * factor,
            log_beta=self.log_beta + 2.0 * math.log(factor),
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.variant == ADIMURTHI_DRUET:
            for key in ("a", "c0", "g_floor"):
                d.pop(key)
        else:
            d.pop("lambda_bar")
        return d


def adimurthi_druet(lambda_bar: float, log_beta: float) -> NonlinearitySpec:
    return NonlinearitySpec(ADIMURTHI_DRUET, lambda_bar=float(lambda_bar), log_beta=float(log_beta))


def gtype(a: float, log_beta: float = 0.0, c0: float | None = None, floor: str = "constant") -> NonlinearitySpec:
    return NonlinearitySpec(GTYPE, log_beta=float(log_beta), a=float(a), c0=c0, g_floor=floor)


@dataclass(frozen=True)
class OddExtension:
    """``t -> f(t)`` extended to negative arguments by ``f(-t) = -f(t)``."""

    base: NonlinearitySpec

    def __call__(self, u: float) -> float:
        return eval_f(self.base, u)


def log_g(spec: NonlinearitySpec, t: float) -> float:
    """log g(t) for t >= 0 (GType only)."""
    a, c0 = spec.a, spec.c0
    if t >= c0:
        return t * t - a * t
    top = c0 * c0 - a * c0
    if spec.g_floor == "constant":
        return top
    # ramp: flat at 1 up to c0/2, then linear up to g(c0)
    if t <= 0.5 * c0:
        return 0.0
    s = (t - 0.5 * c0) / (0.5 * c0)
    return math.log1p(s * math.expm1(top))


def eval_g(spec: NonlinearitySpec, t: float) -> float:
    if spec.variant != GTYPE:
        raise ValueError("eval_g needs a GType spec")
    if t < 0:
        raise ValueError("g is defined on t >= 0")
    lg = log_g(spec, t)
    if lg > EXP_CAP:
        raise _overflow(lg)
    return math.exp(lg)


def _exp_exponent(spec: NonlinearitySpec, au: float) -> float:
    """Exponent of the exponential term of |f(u)| (without the linear part)."""
    if spec.variant == ADIMURTHI_DRUET:
        return au * au + spec.log_beta + math.log(au)
    return log_g(spec, au) + spec.log_beta + math.log(au)


def eval_f(spec: NonlinearitySpec, u: float) -> float:
    u = float(u)
    if u == 0.0:
        return 0.0
    au = abs(u)
    lin = spec.lambda_bar * u if spec.variant == ADIMURTHI_DRUET else 0.0
    if spec.log_beta == -math.inf:
        return lin
    e = _exp_exponent(spec, au)
    if e > EXP_CAP:
        raise _overflow(e)
    return lin + math.copysign(math.exp(e), u)


def log_f(spec: NonlinearitySpec, u: float) -> float:
    """log f(u) for u > 0, never overflowing (logaddexp of the two parts)."""
    if u <= 0:
        raise ValueError("log_f needs u > 0")
    e = -math.inf if spec.log_beta == -math.inf else _exp_exponent(spec, u)
    if spec.variant == ADIMURTHI_DRUET and spec.lambda_bar > 0:
        return float(np.logaddexp(math.log(spec.lambda_bar * u), e))
    return e


def scaled_f(spec: NonlinearitySpec, two_x, u):
    """Vectorised ``exp(two_x) * f(u)``; the exponential factor joins the log-domain sum."""
    u = np.asarray(u, dtype=float)
    two_x = np.asarray(two_x, dtype=float)
    au = np.abs(u)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.zeros(np.broadcast(two_x, u).shape)
        if spec.variant == ADIMURTHI_DRUET:
            out = out + spec.lambda_bar * np.exp(two_x) * u
        if spec.log_beta != -math.inf:
            if spec.variant == ADIMURTHI_DRUET:
                lg = au * au
            else:
                lg = np.vectorize(lambda t: log_g(spec, t), otypes=[float])(au)
            e = two_x + lg + spec.log_beta + np.log(au)
            out = out + np.where(au > 0, np.sign(u) * np.exp(e), 0.0)
    return out


def primitive_F(spec: NonlinearitySpec, t: float) -> float:
    """``F(t) = int_0^t f`` in closed form (even in t)."""
    t = abs(float(t))
    if spec.log_beta == -math.inf:
        return 0.5 * spec.lambda_bar * t * t if spec.variant == ADIMURTHI_DRUET else 0.0
    beta = math.exp(spec.log_beta)
    if spec.variant == ADIMURTHI_DRUET:
        return 0.5 * spec.lambda_bar * t * t + 0.5 * beta * math.expm1(t * t)
    a, c0 = spec.a, spec.c0
    top = math.exp(c0 * c0 - a * c0)

    def below(s: float) -> float:
        # int_0^s u g(u) du on the floor region
        if spec.g_floor == "constant":
            return 0.5 * top * s * s
        h = 0.5 * c0
        if s <= h:
            return 0.5 * s * s
        m = (top - 1.0) / h
        # g(u) = 1 + m (u - h) on [h, c0]
        return 0.5 * h * h + (0.5 * (1.0 - m * h) * (s * s - h * h) + m * (s ** 3 - h ** 3) / 3.0)

    if t <= c0:
        return beta * below(t)

    def upper(s: float) -> float:
        # antiderivative of u exp(u^2 - a u) via Dawson's integral
        return 0.5 * math.exp(s * s - a * s) * (1.0 + a * dawsn(s - 0.5 * a))

    if t * t - a * t + spec.log_beta > EXP_CAP:
        raise _overflow(t * t - a * t + spec.log_beta)
    return beta * (below(c0) + upper(t) - upper(c0))
