import numpy as np
import pytest

from inertial_tls import (
    DegenerateHamiltonian,
    IntegratorConfig,
    eigensystem,
    fields_at,
    ground_state,
    integrate_liouville,
    integrate_spinor,
    liouville_rhs,
    normalized_energy,
    omega_rabi_at,
    theta_at,
)

from conftest import ALPHA0, make_params

TIGHT = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)


def ground_v0(params):
    return np.array([-abs(omega_rabi_at(params, 0.0)) / 2.0, 0.0, 0.0])


def spinor_ground(params):
    omega, epsilon, _, _ = fields_at(params, 0.0)
    return ground_state(omega, epsilon)


def test_rhs_vanishes_on_zero_mode():
    # gamma = delta = 0 keeps Omega constant; the (1, 0, mu) direction is the
    # stationary eigenvector
    p = make_params(0.0, gamma=0.0)
    v = 7.3 * np.array([1.0, 0.0, -1.0])
    assert np.abs(liouville_rhs(4.1e-5, v, p)).max() == 0.0


def test_rhs_zero_field_member():
    # alpha0 = gamma = 0 is the H = 0 member of the family: everything static
    p = make_params(0.0, alpha0=0.0, gamma=0.0)
    v = np.array([0.4, -0.2, 1.1])
    assert np.array_equal(liouville_rhs(1e-4, v, p), np.zeros(3))


@pytest.mark.parametrize("delta_ratio", [-0.05, 0.01])
def test_rhs_matches_spinor_derivative(delta_ratio):
    # central difference of the independent spinor route, O(h^2) convergence
    p = make_params(delta_ratio, n_samples=50)
    t0 = 0.8e-4
    errs = []
    for h in (2e-8, 1e-8):
        grid = np.array([0.0, t0 - h, t0, t0 + h])
        traj = integrate_spinor(p, spinor_ground(p), TIGHT, t_grid=grid)
        fd = (traj.v[3] - traj.v[1]) / (2 * h)
        rhs = liouville_rhs(t0, traj.v[2], p)
        errs.append(np.abs(fd - rhs).max() / np.abs(rhs).max())
    assert errs[0] > errs[1]
    assert errs[1] < 1e-4


def test_liouville_matches_constant_mu_closed_form():
    # delta = 0: u(theta) rotates by exp(-i B' theta); closed-form oracle
    p = make_params(0.0, n_samples=300)
    v0 = ground_v0(p)
    traj = integrate_liouville(p, v0, TIGHT)
    es = eigensystem(p.mu0)
    theta = theta_at(p, traj.t)
    omega_rabi = omega_rabi_at(p, traj.t)
    w0 = es.p_inv @ v0.astype(complex)
    phases = np.exp(-1j * np.outer(theta, [0.0, es.kappa, -es.kappa]))
    v_ref = np.einsum("ij,tj->ti", es.p, phases * w0)
    v_ref = (omega_rabi / omega_rabi[0])[:, None] * v_ref.real
    assert np.abs(traj.v - v_ref).max() < 1e-8 * abs(omega_rabi[0])


@pytest.mark.parametrize("delta_ratio", [0.0, -0.01, 0.05])
def test_norm_conservation(delta_ratio):
    p = make_params(delta_ratio, n_samples=400)
    omega0 = omega_rabi_at(p, 0.0)
    for traj in (
        integrate_liouville(p, ground_v0(p), TIGHT),
        integrate_spinor(p, spinor_ground(p), TIGHT),
    ):
        radius = (traj.v**2).sum(axis=1)
        assert np.abs(radius - traj.omega_rabi**2 / 4.0).max() < 1e-8 * omega0**2


def test_cross_oracle_agreement():
    p = make_params(-0.01, n_samples=400)
    a = integrate_liouville(p, ground_v0(p), TIGHT)
    b = integrate_spinor(p, spinor_ground(p), TIGHT)
    assert np.abs(a.v - b.v).max() < 1e-8 * abs(omega_rabi_at(p, 0.0))


def test_cross_oracle_converges_with_tolerance():
    p = make_params(0.05, n_samples=200)
    ref = integrate_spinor(p, spinor_ground(p), IntegratorConfig(rel_tol=1e-12))
    devs = []
    for rel in (1e-5, 1e-7, 1e-9):
        run = integrate_liouville(p, ground_v0(p), IntegratorConfig(rel_tol=rel, abs_tol=1e-14))
        devs.append(np.abs(run.v - ref.v).max())
    assert devs[0] > devs[1] > devs[2]


def test_time_reversal_returns_initial_state():
    p = make_params(-0.05, n_samples=200)
    v0 = ground_v0(p)
    fwd = integrate_liouville(p, v0, TIGHT)
    # integrate the reversed-time dynamics back to t = 0
    from scipy.integrate import solve_ivp

    sol = solve_ivp(
        lambda t, v: liouville_rhs(t, v, p),
        (p.t_final, 0.0), fwd.v[-1], method="DOP853",
        rtol=1e-12, atol=1e-14 * abs(ALPHA0),
    )
    assert sol.success
    assert np.abs(sol.y[:, -1] - v0).max() < 1e-6 * abs(ALPHA0)


def test_spinor_unitarity_drift():
    p = make_params(0.05, n_samples=300)
    psi = spinor_ground(p)
    traj = integrate_spinor(p, psi, IntegratorConfig())
    # norm conservation of the underlying state shows up as the Bloch radius
    radius = (traj.v**2).sum(axis=1) / (traj.omega_rabi**2 / 4.0)
    assert np.abs(radius - 1.0).max() < 1e-10


def test_spinor_zero_field_populations_constant():
    p = make_params(0.0, alpha0=0.0, gamma=0.0, n_samples=50)
    psi0 = ground_state(1.0, 0.0)  # any normalized state; field is zero
    traj = integrate_spinor(p, psi0, IntegratorConfig())
    assert np.abs(traj.v - traj.v[0]).max() == 0.0


def test_normalized_energy_starts_at_one():
    p = make_params(-0.01, n_samples=200)
    traj = integrate_spinor(p, spinor_ground(p), IntegratorConfig())
    _, e = normalized_energy(traj)
    assert e[0] == 1.0


def test_ground_state_sigma_z():
    psi = ground_state(2.0, 0.0)
    assert psi.amp0 == 0.0
    assert psi.amp1 == 1.0


def test_ground_state_sigma_x():
    psi = ground_state(0.0, 2.0)
    assert psi.amp0.real == pytest.approx(-1 / np.sqrt(2), rel=1e-15)
    assert psi.amp1.real == pytest.approx(1 / np.sqrt(2), rel=1e-15)
    assert psi.amp1.real >= 0.0  # gauge: amp1 real and non-negative


@pytest.mark.parametrize("omega,epsilon", [(3.0, 4.0), (-1.0, 0.5), (0.2, -2.2)])
def test_ground_state_energy(omega, epsilon):
    from inertial_tls import expectations_from_spinor

    psi = ground_state(omega, epsilon)
    vec = expectations_from_spinor(psi, omega, epsilon)
    assert vec.h == pytest.approx(-np.hypot(omega, epsilon) / 2.0, rel=1e-14)


def test_ground_state_degenerate_raises():
    with pytest.raises(DegenerateHamiltonian):
        ground_state(0.0, 0.0)


def test_trajectory_sample_pairs():
    p = make_params(-0.01, n_samples=60)
    traj = integrate_liouville(p, ground_v0(p), IntegratorConfig())
    ps, vec = traj.sample(10)
    assert ps.t == traj.t[10]
    assert vec.h == traj.v[10, 0]
    assert vec.id_coeff == 1.0


def test_trajectory_grid_validation():
    from inertial_tls.exact import make_trajectory

    p = make_params(0.0, n_samples=10)
    v = np.zeros((10, 3))
    grid = np.linspace(1e-6, p.t_final, 10)  # does not start at zero
    with pytest.raises(ValueError):
        make_trajectory(p, "exact-liouville", v, grid)
