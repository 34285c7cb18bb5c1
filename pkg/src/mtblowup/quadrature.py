"""Adaptive composite Gauss-Legendre quadrature.

One engine serves the whole package: eigenfunction normalisations, the
alpha_k integrals and every profile functional in :mod:`diagnostics`.
Each panel is integrated with an n-point rule and with the same rule on its
two halves; panels whose two estimates disagree are bisected.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = ["integrate", "QuadratureError"]


class QuadratureError(RuntimeError):
    pass


@lru_cache(maxsize=8)
def _rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel_sums(f, lo: np.ndarray, hi: np.ndarray, n: int) -> np.ndarray:
    nodes, weights = _rule(n)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ weights)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    breaks: Sequence[float] | np.ndarray,
    rtol: float = 1e-10,
    atol: float = 0.0,
    n: int = 8,
    max_panels: int = 2_000_000,
) -> float:
    """Integrate a vectorised ``f`` over ``[breaks[0], breaks[-1]]``.

    ``breaks`` are the initial panel boundaries (e.g. the step endpoints of
    an ODE solution); integrand kinks should sit on them. The estimate is
    accepted once the summed bisection error is below
    ``max(atol, rtol * |I|)``; panels are refined only while that total is
    over budget, so round-off noise in tiny panels does not stall it.
    """
    b = np.asarray(breaks, dtype=float)
    if b.ndim != 1 or b.size < 2:
        raise ValueError("need at least two break points")
    if np.any(np.diff(b) < 0):
        raise ValueError("break points must be non-decreasing")
    lo, hi = b[:-1], b[1:]
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return 0.0

    whole = _panel_sums(f, lo, hi, n)
    done = 0.0
    done_err = 0.0
    span = float(b[-1] - b[0])
    while True:
        mid = 0.5 * (lo + hi)
        left = _panel_sums(f, lo, mid, n)
        right = _panel_sums(f, mid, hi, n)
        fine = left + right
        err = np.abs(fine - whole)
        total = done + float(np.sum(fine))
        budget = max(atol, rtol * abs(total))
        if done_err + float(np.sum(err)) <= budget:
            return total
        # per-panel share of the budget proportional to panel width
        share = budget * (hi - lo) / span
        ok = (err <= share) | (err <= 64 * np.finfo(float).eps * np.abs(fine))
        done += float(np.sum(fine[ok]))
        done_err += float(np.sum(err[ok]))
        if ok.all():
            return done
        bad = ~ok
        lo_b, mid_b, hi_b = lo[bad], mid[bad], hi[bad]
        lo = np.concatenate([lo_b, mid_b])
        hi = np.concatenate([mid_b, hi_b])
        whole = np.concatenate([left[bad], right[bad]])
        order = np.argsort(lo, kind="stable")
        lo, hi, whole = lo[order], hi[order], whole[order]
        if lo.size > max_panels or np.any(hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(lo))):
            raise QuadratureError(
                f"no convergence: {lo.size} panels outstanding, error {float(err[bad].sum()):.3e}"
            )
