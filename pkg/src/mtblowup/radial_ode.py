"""Radial initial-value problem ``u'' + u'/r = -f(u)``, ``u(0) = gamma``, in log-radius.

With ``x = ln r`` and ``v(x) = u(e^x)`` the equation becomes
``v_xx = -e^{2x} f(v)``. The integrator works with the deficit ``w = gamma - v``
(so ``w_xx = e^{2x} f(gamma - w)``), which keeps full relative precision in
the bubble core where ``u`` differs from ``gamma`` by ~1e-8.

Stepping uses the Dormand-Prince 5(4) pair. Dense output is the quintic
Hermite interpolant built from ``w, w_x, w_xx`` at step endpoints (``w_xx``
comes free from the equation).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .nonlinearity import (
    ADIMURTHI_DRUET,
    EXP_CAP,
    NonlinearitySpec,
    OverflowGuardError,
    log_f,
    log_g,
    primitive_F,
)

__all__ = [
    "IntegrationError",
    "Zero",
    "RadialProfile",
    "integrate",
    "energy_monitor",
    "x_start_for",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-12
H_MAX = 0.25
CSV_MAX_ROWS = 20_000

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Zero:
    r: float
    du_dr: float


def _scaled_rhs(spec: NonlinearitySpec, gamma: float):
    """Return ``S(x, w) = e^{2x} f(gamma - w)`` as a fast scalar closure."""
    lam = spec.lambda_bar if spec.variant == ADIMURTHI_DRUET else 0.0
    lb = spec.log_beta
    has_exp = lb != -math.inf
    exp, log, copysign = math.exp, math.log, math.copysign

    if spec.variant == ADIMURTHI_DRUET:

        def expo(av):
            return av * av

    else:

        def expo(av, _spec=spec):
            return log_g(_spec, av)

    def S(x, w):
        v = gamma - w
        out = lam * exp(2.0 * x) * v if lam else 0.0
        if has_exp and v != 0.0:
            av = abs(v)
            e = 2.0 * x + expo(av) + lb + log(av)
            if e > EXP_CAP:
                raise OverflowGuardError(f"exponent {e:.1f} at x={x:.4f}: gamma too large for 64-bit mode")
            out += copysign(exp(e), v)
        return out

    return S


def x_start_for(spec: NonlinearitySpec, gamma: float) -> float:
    """Series-start abscissa ``ln(mu_hat) - 8`` with ``mu_hat^2 = 4 / (gamma * max(f(gamma), lambda_bar gamma + 1))``."""
    lf = log_f(spec, gamma)
    lin = spec.lambda_bar * gamma + 1.0 if spec.variant == ADIMURTHI_DRUET else 1.0
    big = max(lf, math.log(lin))
    return 0.5 * (math.log(4.0) - math.log(gamma) - big) - 8.0


def _hermite(h, t, w0, p0, s0, w1, p1, s1, deriv: int = 0):
    """Quintic Hermite on one step (vectorised over t in [0, 1])."""
    t2 = t * t
    t3 = t2 * t
    t4 = t3 * t
    t5 = t4 * t
    if deriv == 0:
        h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5
        h10 = t - 6 * t3 + 8 * t4 - 3 * t5
        h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5
        h01 = 10 * t3 - 15 * t4 + 6 * t5
        h11 = -4 * t3 + 7 * t4 - 3 * t5
        h21 = 0.5 * t3 - t4 + 0.5 * t5
        return (h00 * w0 + h01 * w1) + h * (h10 * p0 + h11 * p1) + h * h * (h20 * s0 + h21 * s1)
    h00 = -30 * t2 + 60 * t3 - 30 * t4
    h10 = 1 - 18 * t2 + 32 * t3 - 15 * t4
    h20 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4
    h01 = -h00
    h11 = -12 * t2 + 28 * t3 - 15 * t4
    h21 = 1.5 * t2 - 4 * t3 + 2.5 * t4
    return (h00 * w0 + h01 * w1) / h + (h10 * p0 + h11 * p1) + h * (h20 * s0 + h21 * s1)


@dataclass(frozen=True)
class RadialProfile:
    """Dense radial solution on ``x = ln r`` from ``x_start`` to the last grid point.

    Stored per grid point: deficit ``w = gamma - u``, ``w_x`` and ``w_xx``.
    Below ``x_start`` the two-term Taylor seed is used.
    """

    gamma: float
    spec: NonlinearitySpec
    x_start: float
    log_f_gamma: float
    x_grid: np.ndarray
    w: np.ndarray
    dw: np.ndarray
    d2w: np.ndarray
    zeros: tuple[Zero, ...] = field(default=())

    def __post_init__(self):
        for name in ("x_grid", "w", "dw", "d2w"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def u_vals(self) -> np.ndarray:
        return self.gamma - self.w

    @property
    def du_dx_vals(self) -> np.ndarray:
        return -self.dw

    @property
    def r_grid(self) -> np.ndarray:
        return np.exp(self.x_grid)

    @property
    def x_end(self) -> float:
        return float(self.x_grid[-1])

    def deficit(self, x, deriv: int = 0):
        """``w`` (deriv=0) or ``w_x`` (deriv=1) at arbitrary log-radii."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        xg = self.x_grid
        out = np.empty_like(x)

        lo = x < xg[0]
        if lo.any():
            seed = np.exp(self.log_f_gamma + 2.0 * x[lo])
            out[lo] = seed / 4.0 if deriv == 0 else seed / 2.0
        hi = x > xg[-1]
        if hi.any():
            dx = x[hi] - xg[-1]
            if deriv == 0:
                out[hi] = self.w[-1] + self.dw[-1] * dx + 0.5 * self.d2w[-1] * dx * dx
            else:
                out[hi] = self.dw[-1] + self.d2w[-1] * dx
        mid = ~(lo | hi)
        if mid.any():
            xm = x[mid]
            i = np.clip(np.searchsorted(xg, xm, side="right") - 1, 0, xg.size - 2)
            h = xg[i + 1] - xg[i]
            t = (xm - xg[i]) / h
            out[mid] = _hermite(
                h, t, self.w[i], self.dw[i], self.d2w[i], self.w[i + 1], self.dw[i + 1], self.d2w[i + 1], deriv
            )
        return float(out[0]) if scalar else out

    def u_at(self, r):
        return self.gamma - self.deficit(np.log(r))

    def du_dr_at(self, r):
        r = np.asarray(r, dtype=float)
        return -self.deficit(np.log(r), deriv=1) / r

    def rescaled(self, factor: float, spec: NonlinearitySpec | None = None) -> "RadialProfile":
        """Profile of ``r -> u(factor * r)``."""
        shift = math.log(factor)
        return replace(
            self,
            spec=spec if spec is not None else self.spec.rescaled(factor),
            x_start=self.x_start - shift,
            log_f_gamma=self.log_f_gamma + 2.0 * shift,
            x_grid=self.x_grid - shift,
            zeros=tuple(Zero(z.r / factor, z.du_dr * factor) for z in self.zeros),
        )

    def to_csv(self, path, max_rows: int = CSV_MAX_ROWS) -> None:
        n = self.x_grid.size
        idx = np.arange(n) if n <= max_rows else np.unique(np.linspace(0, n - 1, max_rows).round().astype(int))
        r = np.exp(self.x_grid[idx])
        u = self.u_vals[idx]
        du_dr = -self.dw[idx] / r
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["r", "u", "du_dr"])
            for row in zip(r, u, du_dr):
                wr.writerow([f"{v:.17g}" for v in row])


def _kink_levels(spec: NonlinearitySpec) -> tuple[float, ...]:
    if spec.variant == ADIMURTHI_DRUET or spec.log_beta == -math.inf:
        return ()
    levels = [spec.c0] + ([0.5 * spec.c0] if spec.g_floor == "ramp" else [])
    return tuple(levels) + tuple(-v for v in levels)


def _kink_step(kinks, v0, v1, h, v_of_t):
    """Shortened step length ending on the first kink level crossed, or None."""
    best = None
    for lvl in kinks:
        if (v0 - lvl) * (v1 - lvl) >= 0.0:
            continue
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if (v_of_t(mid) - lvl) * (v0 - lvl) > 0.0:
                lo = mid
            else:
                hi = mid
        if best is None or lo < best:
            best = lo
    if best is None or best < 1e-6:
        return None
    return best * h


def _dp_step(S, x, w, p, s, h):
    """One Dormand-Prince step for (w, p) with w' = p, p' = S(x, w)."""
    ps = [p]
    ss = [s]
    for i in range(1, 6):
        a = _A[i]
        wi = w + h * sum(a[j] * ps[j] for j in range(i))
        pi = p + h * sum(a[j] * ss[j] for j in range(i))
        ps.append(pi)
        ss.append(S(x + _C[i] * h, wi))
    w_new = w + h * sum(_B[j] * ps[j] for j in range(6))
    p_new = p + h * sum(_B[j] * ss[j] for j in range(6))
    s_new = S(x + h, w_new)
    ps.append(p_new)
    ss.append(s_new)
    err_w = h * sum(_E[j] * ps[j] for j in range(7))
    err_p = h * sum(_E[j] * ss[j] for j in range(7))
    return w_new, p_new, s_new, err_w, err_p


def integrate(
    spec: NonlinearitySpec,
    gamma: float,
    r_max: float,
    tol: float = DEFAULT_TOL,
    stop_at_zero: int | None = None,
    x_start: float | None = None,
) -> RadialProfile:
    """Integrate from the Taylor seed out to ``r_max``.

    If ``stop_at_zero`` is given, integration ends exactly at that zero of
    ``u`` (counted from the centre) and the last grid point sits on it.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-14, 1e-6]")
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    lf = log_f(spec, gamma)
    if lf > EXP_CAP:
        raise OverflowGuardError(f"log f(gamma) = {lf:.1f}: gamma too large for 64-bit mode")
    S = _scaled_rhs(spec, gamma)
    x0 = x_start_for(spec, gamma) if x_start is None else float(x_start)
    x_end = math.log(r_max)
    if x_end <= x0:
        raise ValueError("r_max lies inside the seed region")

    seed = math.exp(lf + 2.0 * x0) if lf > -math.inf else 0.0
    x, w, p = x0, seed / 4.0, seed / 2.0
    s = S(x, w)
    xs, ws, ps, ss = [x], [w], [p], [s]
    zeros: list[Zero] = []
    h = min(0.05, x_end - x)
    thresh = 1e-13 * gamma
    kinks = _kink_levels(spec)

    while x < x_end:
        h = min(h, x_end - x)
        if h <= 1e-14 * max(1.0, abs(x)):
            raise IntegrationError(f"step-size underflow at x={x:.6f}")
        w1, p1, s1, ew, ep = _dp_step(S, x, w, p, s, h)
        sw = tol * (1.0 + max(abs(w), abs(w1)))
        sp = tol * (1.0 + max(abs(p), abs(p1)))
        err = max(abs(ew) / sw, abs(ep) / sp)
        if not math.isfinite(err):
            raise IntegrationError(f"non-finite solution at x={x:.6f}")
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            continue

        v0, v1 = gamma - w, gamma - w1
        hk = _kink_step(kinks, v0, v1, h, lambda t: gamma - _hermite(h, t, w, p, s, w1, p1, s1))
        if hk is not None:
            # f' jumps at a kink of g: end the step on it instead of stepping over
            h = hk
            continue
        crossed = v0 != 0.0 and (v0 > 0.0) != (v1 > 0.0)
        if crossed:
            def v_of(xx, _x=x, _h=h, a=(w, p, s, w1, p1, s1)):
                return gamma - _hermite(_h, (xx - _x) / _h, *a)

            lo_x, hi_x = x, x + h
            xz = hi_x
            for _ in range(200):
                xz = 0.5 * (lo_x + hi_x)
                vz = v_of(xz)
                if abs(vz) <= thresh or xz in (lo_x, hi_x):
                    break
                if (vz > 0.0) == (v0 > 0.0):
                    lo_x = xz
                else:
                    hi_x = xz
            if stop_at_zero is not None and len(zeros) + 1 == stop_at_zero:
                # land the final grid point on the zero: re-step, then Newton-polish the length
                for _ in range(4):
                    hz = xz - x
                    wz, pz, sz, _, _ = _dp_step(S, x, w, p, s, hz)
                    vz = gamma - wz
                    if abs(vz) <= thresh or pz == 0.0:
                        break
                    xz = xz + vz / pz
                xs.append(xz)
                ws.append(wz)
                ps.append(pz)
                ss.append(sz)
                zeros.append(Zero(math.exp(xz), -pz * math.exp(-xz)))
                break
            rz = math.exp(xz)
            dz = _hermite(h, (xz - x) / h, w, p, s, w1, p1, s1, deriv=1)
            zeros.append(Zero(rz, -dz / rz))

        x = x + h
        w, p, s = w1, p1, s1
        xs.append(x)
        ws.append(w)
        ps.append(p)
        ss.append(s)
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = min(h * fac, H_MAX)

    return RadialProfile(
        gamma=float(gamma),
        spec=spec,
        x_start=x0,
        log_f_gamma=lf,
        x_grid=np.array(xs),
        w=np.array(ws),
        dw=np.array(ps),
        d2w=np.array(ss),
        zeros=tuple(zeros),
    )


def energy_monitor(profile: RadialProfile) -> list[float]:
    """Lyapunov function along the grid.

    AdimurthiDruet: ``(u')^2 + lambda u^2 + beta exp(u^2)``; GType:
    ``(u')^2 / 2 + F(u)``. Both are nonincreasing in r for exact solutions.
    """
    spec = profile.spec
    u = profile.u_vals
    du_dr = -profile.dw * np.exp(-profile.x_grid)
    if spec.variant == ADIMURTHI_DRUET:
        e = du_dr ** 2 + spec.lambda_bar * u ** 2
        if spec.log_beta != -math.inf:
            e = e + np.exp(spec.log_beta + u ** 2)
        return [float(v) for v in e]
    return [float(0.5 * d * d + primitive_F(spec, uu)) for d, uu in zip(du_dr, u)]
