import json
import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mtblowup import bubble
from mtblowup.nonlinearity import adimurthi_druet, gtype
from mtblowup.shooting import TheoremOneConfig, solve_theorem1


def _d2(f, y, h=1e-3):
    return (-f(y + 2 * h) + 16 * f(y + h) - 30 * f(y) + 16 * f(y - h) - f(y - 2 * h)) / (12 * h * h)


def _d1(f, y, h=1e-3):
    return (-f(y + 2 * h) + 8 * f(y + h) - 8 * f(y - h) + f(y - 2 * h)) / (12 * h)


def _lap(f, y):
    """Radial Laplacian with the positive-operator sign: -(f'' + f'/y)."""
    h = 3e-3 * max(1.0, y)
    return -(_d2(f, y, h) + _d1(f, y, h) / y)


def test_profile_values():
    assert bubble.T0(0.0) == 0.0
    assert bubble.T0(1.0) == pytest.approx(math.log(2.0), abs=1e-15)
    assert bubble.S0(0.0) == 0.0
    assert bubble.S0(1.0) == pytest.approx(-0.5 * math.log(2.0) + 0.25, abs=1e-15)


@pytest.mark.parametrize("y", [0.5, 2.0, 7.0])
def test_liouville_equation(y):
    res = _lap(bubble.T0, y) + 4 * np.exp(-2 * bubble.T0(y))
    assert abs(res) <= 1e-10


@pytest.mark.parametrize("y", [0.5, 2.0, 7.0])
def test_corrector_equation(y):
    e = np.exp(-2 * bubble.T0(y))
    res = _lap(bubble.S0, y) - 8 * e * bubble.S0(y) - 4 * bubble.T0(y) * e
    assert abs(res) <= 1e-8


@given(st.floats(0.1, 20.0))
def test_profile_equations_random(y):
    e = np.exp(-2 * bubble.T0(y))
    assert abs(_lap(bubble.T0, y) + 4 * e) <= 1e-8
    assert abs(_lap(bubble.S0, y) - 8 * e * bubble.S0(y) - 4 * bubble.T0(y) * e) <= 1e-8


def _fake(gamma, spec):
    return SimpleNamespace(gamma=gamma, spec=spec)


def test_scales_theorem1_example():
    sc = bubble.scales_for(_fake(10.0, adimurthi_druet(1.0, -4.5)))
    assert sc.log_mu == pytest.approx(0.5 * (math.log(4) + 4.5 - 2 * math.log(10) - 100), abs=1e-13)
    assert sc.log_mu == pytest.approx(-49.5, abs=0.2)
    assert sc.t(sc.rho1) == pytest.approx(10.0, rel=1e-12)
    assert sc.t(sc.rho) == pytest.approx(50.0, rel=1e-12)
    assert sc.t(0.0) == 0.0


@given(st.floats(2.0, 25.0), st.floats(-30.0, 3.0))
def test_scale_invariants(gamma, lb):
    a = 2.0
    sc = bubble.scales_for(_fake(gamma, gtype(a, lb)))
    assert 2 * sc.log_mu == pytest.approx(math.log(4) - lb - 2 * math.log(gamma) - (gamma ** 2 - a * gamma), abs=1e-9)
    # rho^2 = mu^2 (e^{gamma^2/2} - 1)
    expected = 0.5 * math.log(math.expm1(0.5 * gamma * gamma))
    assert sc.log_rho - sc.log_mu == pytest.approx(expected, rel=1e-13)


def test_tau(t1_6, t1_8):
    assert bubble.tau(t1_6, np.array([0.0]))[0] == 0.0
    assert bubble.tau_deviation(t1_8) < bubble.tau_deviation(t1_6)


def test_inner_residual_t1(t1_6, t1_8):
    r6 = bubble.inner_residual_t1(t1_6)
    r8 = bubble.inner_residual_t1(t1_8)
    assert 0 < r6.max_residual < 10 and r8.max_residual / r6.max_residual <= 3
    d = json.loads(json.dumps(r6.to_dict()))
    assert set(d) == {"window", "max_residual", "argmax_r", "gamma"}
    with pytest.raises(ValueError):
        bubble.inner_residual_t1(t1_6, R_window=1e-300)


def test_centered_mass_routes_agree(t1_6, gtype_9):
    for res in (t1_6, gtype_9):
        assert bubble.centered_mass(res) == pytest.approx(bubble.centered_mass_flux(res), rel=1e-9)


def test_centered_mass_theorem1_trend(t1_6):
    t1_12 = solve_theorem1(TheoremOneConfig(1.0, 12.0))
    rel = [abs(bubble.centered_mass(r) * r.gamma / (4 * math.pi) - 1) for r in (t1_6, t1_12)]
    assert rel[1] < rel[0]


def test_gtype_reports(gtype_6, gtype_9):
    with pytest.raises(ValueError, match="empty"):
        bubble.inner_residual_gtype(gtype_6, 2.0)
    inner, mid = bubble.inner_residual_gtype(gtype_9, 2.0)
    assert math.isfinite(inner.max_residual) and math.isfinite(mid.max_residual)
    assert inner.window[1] == mid.window[0]


def test_second_order_sign(gtype_9):
    # gamma (tau - T0) approaches -a S0, the limit consistent with u = gamma - t/gamma + a S/gamma^2
    minus = bubble.second_order_deviation(gtype_9, 2.0)
    plus = bubble.second_order_deviation(gtype_9, 2.0, sign=1.0)
    assert minus < 1.0 < plus
