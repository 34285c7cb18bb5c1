import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from mtblowup.nonlinearity import OverflowGuardError, adimurthi_druet, eval_f, gtype
from mtblowup.radial_ode import energy_monitor, integrate, x_start_for
from mtblowup.shooting import NO_EXP_LOG_BETA, TheoremOneConfig
from mtblowup.special_functions import eigen_data, vbar1

E1 = eigen_data(1)
LINEAR = adimurthi_druet(E1.lambda_k, -math.inf)
# log beta solving the l=1, gamma=8 problem (scipy DOP853 + brentq oracle)
LOG_BETA_T1_8 = -4.932529734546207


def t1_spec(gamma=8.0, log_beta=LOG_BETA_T1_8):
    return adimurthi_druet(TheoremOneConfig(1.0, gamma).lambda_bar, log_beta)


def test_eigen_round_trip():
    prof = integrate(LINEAR, 1.0, 3.0)
    r = np.concatenate([prof.r_grid, np.linspace(1e-4, 3.0, 3000)])
    assert np.max(np.abs(prof.u_at(r) - vbar1(r) / E1.norm_c)) <= 1e-8
    assert [round(z.r, 6) for z in prof.zeros] == [1.0, round(eigen_data(2).r_k, 6)]


def test_first_zero_of_linear_problem():
    prof = integrate(LINEAR, 1.0, 1.5, stop_at_zero=1)
    assert prof.zeros[0].r == pytest.approx(1.0, abs=1e-9)
    assert math.exp(prof.x_end) == prof.zeros[0].r
    assert abs(prof.u_vals[-1]) <= 1e-13


def test_harmonic_profile_is_constant():
    spec = adimurthi_druet(0.0, NO_EXP_LOG_BETA)
    prof = integrate(spec, 1.0, 5.0)
    assert not prof.zeros
    assert np.all(prof.u_vals == 1.0)
    e = energy_monitor(prof)
    assert max(e) == min(e)


def test_monotone_until_first_zero():
    prof = integrate(t1_spec(), 8.0, 1.2, stop_at_zero=1)
    assert np.all(np.diff(prof.u_vals) < 0)
    assert prof.zeros[0].du_dr < 0


def test_zeros_are_transversal_and_alternate():
    prof = integrate(LINEAR, 1.0, 6.0)
    slopes = [z.du_dr for z in prof.zeros]
    assert len(slopes) >= 3
    assert all(abs(s) > 0.1 for s in slopes)
    assert all(a * b < 0 for a, b in zip(slopes, slopes[1:]))
    for a, b in zip(prof.zeros, prof.zeros[1:]):
        r = np.linspace(a.r, b.r, 200)[1:-1]
        u = prof.u_at(r)
        assert np.all(u > 0) or np.all(u < 0)


def test_x_start_formula():
    # pure linear, gamma = 1: 0.5 (ln 4 - ln(lambda_1 + 1)) - 8
    assert x_start_for(LINEAR, 1.0) == pytest.approx(0.5 * (math.log(4) - math.log(E1.lambda_k + 1)) - 8, abs=1e-14)
    spec = adimurthi_druet(TheoremOneConfig(1.0, 10.0).lambda_bar, -4.5)
    log_mu = 0.5 * (math.log(4) + 4.5 - 2 * math.log(10) - 100)
    assert x_start_for(spec, 10.0) == pytest.approx(log_mu - 8, abs=1e-12)


def test_seed_accuracy_against_deeper_start():
    spec = t1_spec()
    x0 = x_start_for(spec, 8.0)
    ref = integrate(spec, 8.0, 1.0, tol=1e-14, x_start=x0 - 4)
    prof = integrate(spec, 8.0, 1.0)
    assert abs(ref.deficit(x0) - prof.w[0]) / 8.0 <= 1e-15


def test_seed_accuracy_linear_case():
    # the neglected r^4 Taylor term is lambda^2 r^4 / 64 ~ 2e-15 at this start
    x0 = x_start_for(LINEAR, 1.0)
    ref = integrate(LINEAR, 1.0, 1.0, tol=1e-14, x_start=x0 - 4)
    prof = integrate(LINEAR, 1.0, 1.0)
    r2 = math.exp(2 * x0)
    assert abs(ref.deficit(x0) - prof.w[0]) <= 2 * E1.lambda_k ** 2 * r2 * r2 / 64


@pytest.mark.parametrize("spec,gamma", [(LINEAR, 1.0), (t1_spec(6.0, -3.4), 6.0), (gtype(2.0), 6.0)], ids=["linear", "t1", "gtype"])
def test_self_convergence(spec, gamma):
    tol = 1e-10
    a = integrate(spec, gamma, 1.5, tol=tol).u_at(1.0)
    b = integrate(spec, gamma, 1.5, tol=tol / 2).u_at(1.0)
    assert abs(a - b) <= 50 * tol


def _r_oracle(spec, gamma, r_eval):
    r0 = 1e-6
    f0 = eval_f(spec, gamma)
    sol = solve_ivp(
        lambda r, y: [y[1], -y[1] / r - eval_f(spec, y[0])],
        (r0, max(r_eval)),
        [gamma - f0 * r0 * r0 / 4, -f0 * r0 / 2],
        method="DOP853",
        rtol=1e-13,
        atol=1e-14,
        t_eval=r_eval,
    )
    return sol.y[0]


def test_log_radius_matches_direct_radial_integration():
    spec = adimurthi_druet(2.0, -3.0)
    r = [0.5, 1.0]
    prof = integrate(spec, 1.0, 1.5)
    assert np.max(np.abs(prof.u_at(np.array(r)) - _r_oracle(spec, 1.0, r))) <= 1e-9


def test_energy_monitor_linear_and_t1():
    e = np.array(energy_monitor(integrate(LINEAR, 1.0, 1.0)))
    assert np.all(np.diff(e) <= 1e-12 * e[0])
    tol = 1e-12
    prof = integrate(t1_spec(6.0, -3.407819985387247), 6.0, 1.0, tol=tol)
    e = np.array(energy_monitor(prof))
    assert np.max(np.diff(e), initial=0.0) <= 10 * tol * e[0]


def test_energy_monitor_gtype():
    prof = integrate(gtype(2.0), 4.0, 1.0)
    e = np.array(energy_monitor(prof))
    assert np.max(np.diff(e)) <= 1e-10 * e[0]


def test_steps_land_on_the_kink_of_g():
    spec = gtype(2.0)
    prof = integrate(spec, 6.0, 1.5)
    assert np.min(np.abs(prof.u_vals - 2.0)) <= 1e-9
    ramp = gtype(2.0, c0=3.0, floor="ramp")
    prof = integrate(ramp, 6.0, 1.5)
    for lvl in (3.0, 1.5):
        assert np.min(np.abs(prof.u_vals - lvl)) <= 1e-9


def test_rescaled_profile():
    prof = integrate(t1_spec(), 8.0, 2.0)
    s = 1.7
    resc = prof.rescaled(s)
    r = np.array([1e-12, 1e-3, 0.2, 0.5])
    assert np.allclose(resc.u_at(r), prof.u_at(s * r), rtol=0, atol=1e-13)
    assert resc.spec.log_beta == pytest.approx(prof.spec.log_beta + 2 * math.log(s))


def test_csv_dump(tmp_path):
    prof = integrate(LINEAR, 1.0, 3.0)
    path = tmp_path / "p.csv"
    prof.to_csv(path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["r", "u", "du_dr"]
    r = [float(row[0]) for row in rows[1:]]
    assert r == sorted(r) and len(r) == prof.x_grid.size
    assert float(rows[-1][1]) == float(f"{prof.u_vals[-1]:.17g}")
    prof.to_csv(path, max_rows=50)
    assert len(path.read_text().splitlines()) <= 51


def test_errors():
    with pytest.raises(ValueError):
        integrate(LINEAR, 1.0, 1.0, tol=1e-3)
    with pytest.raises(ValueError):
        integrate(LINEAR, 1.0, -1.0)
    with pytest.raises(ValueError):
        integrate(LINEAR, 0.0, 1.0)
    with pytest.raises(OverflowGuardError):
        integrate(adimurthi_druet(1.0, 0.0), 27.0, 1.0)
    with pytest.raises(OverflowGuardError):
        integrate(adimurthi_druet(1.0, 0.0), 26.0, 1.0, x_start=-20.0)
    with pytest.raises(ValueError):
        integrate(LINEAR, 1.0, 1e-6)


@given(st.floats(0.5, 10.0), st.floats(-20.0, 0.0), st.floats(0.5, 4.0))
def test_decreasing_to_first_zero(lam, lb, gamma):
    spec = adimurthi_druet(lam, lb)
    prof = integrate(spec, gamma, 3.0 * math.sqrt(E1.lambda_k / lam), tol=1e-10, stop_at_zero=1)
    assert prof.zeros, "a zero exists below sqrt(lambda_1 / lambda)"
    assert prof.zeros[0].r <= math.sqrt(E1.lambda_k / lam) * (1 + 1e-8)
    assert np.all(np.diff(prof.u_vals) < 0)
    # dense output continuity across the seed junction
    x0 = prof.x_start
    assert prof.deficit(x0 - 1e-12) == pytest.approx(prof.deficit(x0 + 1e-12), rel=1e-9)
