"""Bessel functions J0, J1, their zeros, and radial Dirichlet eigen-data of the unit disk.

Fast evaluators split [0, 200] into three ranges:

* ``x <= 7``: Maclaurin series (largest term stays below ~60, so the
  cancellation error is a few 1e-15);
* ``7 < x < 25``: trapezoidal rule applied to Bessel's integral
  ``J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt``, which converges
  geometrically for a periodic analytic integrand;
* ``x >= 25``: Hankel asymptotic expansion truncated at its smallest term.

``j0_oracle``/``j1_oracle`` sum the same Maclaurin series in decimal
arithmetic carrying 40 guard digits beyond the largest term. They are slow and exist only to cross-check the fast path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from .quadrature import integrate

__all__ = [
    "DomainError",
    "EigenData",
    "bessel_j0",
    "bessel_j1",
    "bessel_zero",
    "eigen_data",
    "vbar1",
    "v_k",
    "j0_oracle",
    "j1_oracle",
    "oracle_zero",
]

X_MAX = 200.0
_SERIES_MAX = 7.0
_HANKEL_MIN = 25.0


class DomainError(ValueError):
    """Argument outside the supported domain of an evaluator."""


def _check_x(x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= X_MAX):
        raise DomainError(f"Bessel argument {x!r} outside [0, {X_MAX}]")
    return x


def _series(x: float, order: int) -> float:
    q = -0.25 * x * x
    term = 1.0 if order == 0 else 0.5 * x
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + order))
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            return total


def _trapezoid(x: float, order: int) -> float:
    m = 2 * (int(x) + 25)
    t = np.arange(m) * (2.0 * math.pi / m)
    return float(np.mean(np.cos(order * t - x * np.sin(t))))


def _hankel(x: float, order: int) -> float:
    mu = 4.0 * order * order
    p, q = 0.0, 0.0
    term = 1.0
    k = 0
    while True:
        if k % 2 == 0:
            p += term if (k // 2) % 2 == 0 else -term
        else:
            q += term if (k // 2) % 2 == 0 else -term
        k += 1
        nxt = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17:
            break
        term = nxt
    chi = x - (0.5 * order + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _bessel(x: float, order: int) -> float:
    if x <= _SERIES_MAX:
        return _series(x, order)
    if x < _HANKEL_MIN:
        return _trapezoid(x, order)
    return _hankel(x, order)


def _vectorised(scalar):
    def wrapped(x):
        if np.ndim(x) == 0:
            return scalar(x)
        arr = np.asarray(x, dtype=float)
        return np.fromiter((scalar(v) for v in arr.ravel()), float, arr.size).reshape(arr.shape)

    wrapped.__name__ = scalar.__name__
    wrapped.__doc__ = scalar.__doc__
    return wrapped


@_vectorised
def bessel_j0(x: float) -> float:
    """J0(x) for 0 <= x <= 200, absolute error below 1e-13. Accepts arrays."""
    return _bessel(_check_x(x), 0)


@_vectorised
def bessel_j1(x: float) -> float:
    """J1(x) for 0 <= x <= 200, absolute error below 1e-13. Accepts arrays."""
    return _bessel(_check_x(x), 1)


def _decimal_series(x: float, order: int) -> float:
    with localcontext() as ctx:
        # largest term ~ e^x / x, so the working precision grows with x
        ctx.prec = 40 + int(0.5 * x)
        xd = Decimal(x)
        q = -(xd * xd) / 4
        term = Decimal(1) if order == 0 else xd / 2
        total = term
        k = 0
        eps = Decimal(10) ** -25
        while True:
            k += 1
            term = term * q / (k * (k + order))
            total += term
            if k > x and abs(term) < eps:
                return float(total)


def j0_oracle(x: float) -> float:
    """Slow reference J0: Maclaurin series in extended-precision decimal arithmetic."""
    return _decimal_series(x, 0)


def j1_oracle(x: float) -> float:
    """Slow reference J1, same construction as :func:`j0_oracle`."""
    return _decimal_series(x, 1)


def _bisect_sign_change(fn, lo: float, hi: float) -> float:
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ArithmeticError(f"no sign change on [{lo}, {hi}]")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo if abs(flo) < abs(fhi) else hi
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm


def _zero_in_bracket(fn, k: int, scan: int = 16) -> float:
    lo = (k - 0.75) * math.pi
    hi = (k + 0.25) * math.pi
    grid = np.linspace(lo, hi, scan + 1)
    vals = [fn(float(g)) for g in grid]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            return float(a)
        if (fa > 0) != (fb > 0):
            return _bisect_sign_change(fn, float(a), float(b))
    raise ArithmeticError(f"J0 shows no sign change in [{lo:.6f}, {hi:.6f}] for k={k}")


@lru_cache(maxsize=None)
def bessel_zero(k: int) -> float:
    """k-th positive zero j_{0,k} of J0, 1 <= k <= 20."""
    if int(k) != k or not 1 <= k <= 20:
        raise DomainError(f"zero index {k!r} outside 1..20")
    return _zero_in_bracket(bessel_j0, int(k))


def oracle_zero(k: int) -> float:
    """j_{0,k} by bisection on the decimal-series oracle (slow, for tests)."""
    return _zero_in_bracket(j0_oracle, int(k))


@dataclass(frozen=True)
class EigenData:
    """Radial Dirichlet eigenpair of the unit disk.

    ``v_k(r) = norm_c * J0(j0k r)`` with unit L2 norm on the disk. ``r_k`` and
    ``alpha_k`` describe where the extended first eigenfunction vanishes for
    the k-th time and its L2 mass on that larger disk.
    """

    k: int
    j0k: float
    lambda_k: float
    norm_c: float
    r_k: float
    alpha_k: float

    def v(self, r):
        return self.norm_c * bessel_j0(self.j0k * np.asarray(r, dtype=float))


def vbar1(r):
    """Entire radial extension of v_1 to the plane, 0 <= r <= 20."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr > 20):
        raise DomainError("vbar1 is supported on 0 <= r <= 20")
    j01 = bessel_zero(1)
    c1 = 1.0 / (math.sqrt(math.pi) * abs(bessel_j1(j01)))
    return c1 * bessel_j0(j01 * r_arr)


@lru_cache(maxsize=None)
def eigen_data(k: int) -> EigenData:
    if int(k) != k or not 1 <= k <= 10:
        raise DomainError(f"eigen index {k!r} outside 1..10")
    k = int(k)
    j0k = bessel_zero(k)
    norm_c = 1.0 / (math.sqrt(math.pi) * abs(bessel_j1(j0k)))
    r_k = 1.0 if k == 1 else j0k / bessel_zero(1)
    zeros = [bessel_zero(i) / bessel_zero(1) for i in range(1, k + 1)]
    alpha = 2.0 * math.pi * integrate(lambda s: vbar1(s) ** 2 * s, [0.0, *zeros], rtol=1e-12)
    return EigenData(k=k, j0k=j0k, lambda_k=j0k * j0k, norm_c=norm_c, r_k=r_k, alpha_k=alpha)


def v_k(k: int, r):
    """L2-normalised k-th radial eigenfunction, positive at the origin."""
    return eigen_data(k).v(r)
