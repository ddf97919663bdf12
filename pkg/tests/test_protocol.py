import numpy as np
import pytest

from inertial_tls import (
    SingularMu,
    default_horizon,
    fields_at,
    mu_at,
    omega_rabi_at,
    rabi_rate_at,
    sample_at,
    theta_at,
    theta_by_quadrature,
    validate,
)
from inertial_tls.algebra import kappa_of

from conftest import ALPHA0, DELTA_RATIOS, GAMMA, MU0, T_FINAL, make_params


def test_params_invariants():
    with pytest.raises(ValueError):
        make_params(n_samples=1)
    with pytest.raises(ValueError):
        make_params(t_final=0.0)
    with pytest.raises(ValueError):
        make_params(t_final=-1e-3)


def test_mu_constant_case():
    p = make_params(0.0)
    for t in (0.0, 3.7e-5, T_FINAL):
        assert mu_at(p, t) == -1.0


def test_mu_initial_value_with_ramp():
    p = make_params(0.01)
    assert mu_at(p, 0.0) == -1.0


def test_mu_is_affine():
    p = make_params(-0.05)
    t1, t2 = 2.3e-5, 7.9e-5
    assert mu_at(p, t1) + mu_at(p, t2) == pytest.approx(
        mu_at(p, 0.0) + mu_at(p, t1 + t2), rel=1e-14
    )


@pytest.mark.parametrize("delta_ratio", [-0.05, 0.01])
def test_mu_matches_field_reconstruction(delta_ratio):
    # central differences of (omega, eps) feed the defining combination
    # (omega' * eps - eps' * omega) / Omega^3; second-order convergence
    p = make_params(delta_ratio)
    t0 = 1.1e-4
    errs = []
    for h in (1e-7, 5e-8, 2.5e-8):
        om_p, eps_p, _, _ = fields_at(p, t0 + h)
        om_m, eps_m, _, _ = fields_at(p, t0 - h)
        om, eps, omega_rabi, _ = fields_at(p, t0)
        om_dot = (om_p - om_m) / (2 * h)
        eps_dot = (eps_p - eps_m) / (2 * h)
        mu_fd = (om_dot * eps - eps_dot * om) / omega_rabi**3
        errs.append(abs(mu_fd - mu_at(p, t0)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


def test_fields_at_time_zero():
    p = make_params(0.0)
    omega, epsilon, omega_rabi, alpha = fields_at(p, 0.0)
    assert omega_rabi == pytest.approx(ALPHA0, rel=1e-15)
    assert omega == pytest.approx(ALPHA0, rel=1e-15)
    assert epsilon == 0.0
    assert alpha == ALPHA0


def test_fields_trig_identity():
    p = make_params(0.05)
    t = np.linspace(0.0, T_FINAL, 700)
    omega, epsilon, omega_rabi, _ = fields_at(p, t)
    assert np.max(np.abs(omega**2 + epsilon**2 - omega_rabi**2)
                  / omega_rabi**2) < 1e-12


def test_theta_zero_at_zero():
    assert theta_at(make_params(-0.05), 0.0) == 0.0


def test_theta_closed_form_delta0():
    # delta = 0, mu0 = -1: the antiderivative reduces to alpha0*t + gamma*t^2
    p = make_params(0.0)
    t = np.linspace(0.0, T_FINAL, 50)
    assert np.allclose(theta_at(p, t), ALPHA0 * t + GAMMA * t**2, rtol=1e-12)
    assert theta_by_quadrature(p, T_FINAL) == pytest.approx(
        ALPHA0 * T_FINAL + GAMMA * T_FINAL**2, rel=1e-10
    )


@pytest.mark.parametrize("delta_ratio", [-1.0, -0.01, 1e-7, 0.05])
def test_theta_closed_vs_quadrature(delta_ratio):
    p = make_params(delta_ratio)
    for t in (3.1e-5, 1.07e-4, T_FINAL):
        closed = theta_at(p, t)
        oracle = theta_by_quadrature(p, t)
        assert abs(closed - oracle) <= 1e-10 * abs(oracle)


def test_theta_monotone_when_omega_keeps_sign():
    p = make_params(-0.05)
    t = np.linspace(0.0, T_FINAL, 400)
    _, _, omega_rabi, _ = fields_at(p, t)
    assert np.all(omega_rabi > 0)
    assert np.all(np.diff(theta_at(p, t)) > 0)


def test_rabi_rate_constant_omega():
    p = make_params(0.0, gamma=0.0)
    assert rabi_rate_at(p, 1.3e-4) == 0.0


def test_rabi_rate_delta0():
    # mu pinned at -1 gives Omega = alpha0 + 2*gamma*t
    p = make_params(0.0)
    assert rabi_rate_at(p, 5.5e-5) == pytest.approx(2 * GAMMA, rel=1e-14)


def test_rabi_rate_matches_finite_difference():
    p = make_params(-0.05)
    t0 = 0.9e-4
    errs = []
    for h in (1e-7, 5e-8):
        fd = (omega_rabi_at(p, t0 + h) - omega_rabi_at(p, t0 - h)) / (2 * h)
        errs.append(abs(fd - rabi_rate_at(p, t0)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_singular_mu_raises():
    p = make_params(0.1, t_final=5e-3)
    t_star = 1.0 / (0.1 * ALPHA0)  # mu zero crossing
    with pytest.raises(SingularMu):
        fields_at(p, t_star)
    with pytest.raises(SingularMu):
        theta_at(p, np.array([0.0, 0.5 * t_star, t_star]))
    with pytest.raises(SingularMu):
        rabi_rate_at(p, t_star)


def test_validate_flags_crossing():
    p = make_params(0.01, t_final=5e-3)
    report = validate(p, include_upsilon=False)
    assert not report.ok
    assert report.mu_zero_crossing == pytest.approx(1.0 / (0.01 * ALPHA0), rel=1e-12)


def test_validate_no_crossing_for_negative_ramp():
    for ratio in (0.0, -0.01, -1.0):
        report = validate(make_params(ratio), include_upsilon=False)
        assert report.ok
        assert report.mu_zero_crossing is None
        assert report.min_abs_mu >= 1.0


def test_validate_paper_grid():
    for ratio in DELTA_RATIOS:
        report = validate(make_params(ratio, n_samples=200))
        assert report.ok, ratio
        assert report.max_abs_omega >= ALPHA0
        assert report.upsilon_report is not None
        assert report.upsilon_report.upsilon >= 0.0


def test_sample_at_consistency():
    p = make_params(-0.05)
    s = sample_at(p, 1.2e-4)
    assert s.omega**2 + s.epsilon**2 == pytest.approx(s.omega_rabi**2, rel=1e-12)
    assert s.mu == pytest.approx(MU0 + p.delta * s.t, rel=1e-14)


def test_default_horizon_covers_requested_periods():
    t_h = default_horizon(ALPHA0, GAMMA, MU0, periods=10.0)
    p = make_params(0.0, t_final=t_h)
    covered = kappa_of(MU0) * abs(theta_at(p, t_h)) / (2 * np.pi)
    assert covered == pytest.approx(10.0, rel=1e-9)
    # gamma = 0 falls back to the linear solution
    t_lin = default_horizon(ALPHA0, 0.0, MU0, periods=3.0)
    p_lin = make_params(0.0, gamma=0.0, t_final=t_lin)
    assert kappa_of(MU0) * abs(theta_at(p_lin, t_lin)) == pytest.approx(
        3.0 * 2 * np.pi, rel=1e-12
    )


def test_theta_rejects_interior_crossing():
    # mu crosses zero strictly inside (0, t) while both endpoints are regular
    p = make_params(0.1, t_final=5e-3)
    t_past = 2.0 / (0.1 * ALPHA0)  # mu(t_past) = +1
    with pytest.raises(SingularMu):
        theta_at(p, t_past)
