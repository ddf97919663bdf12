"""Chirped driving protocol for the two-level system.

The drive is a frequency chirp alpha(t) = alpha0 + gamma*t paired with a
linear ramp of the adiabatic parameter mu(t) = mu0 + delta*t.  Those two
choices fix everything else in closed form:

    Omega(t) = -(alpha0 + 2*gamma*t) / mu(t)      generalized Rabi frequency
    omega(t) = Omega(t) * cos(alpha(t)*t)         detuning
    eps(t)   = Omega(t) * sin(alpha(t)*t)         Rabi field
    theta(t) = integral of Omega from 0 to t      scaled time

mu(t) must keep one sign on the horizon: Omega diverges at mu = 0, so every
evaluation guards against a configurable floor on |mu| and raises
``SingularMu`` instead of clamping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .errors import SingularMu

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ProtocolParams:
    """All driving constants plus horizon and sampling.

    Units are radians/seconds throughout (the CLI converts kHz/ms inputs
    once at the boundary).

    alpha0   : initial chirp frequency [rad/s]
    gamma    : chirp rate [rad/s^2]
    mu0      : initial adiabatic parameter (dimensionless)
    delta    : adiabatic-parameter ramp rate d(mu)/dt [1/s]
    t_final  : horizon [s]
    n_samples: number of sample times on [0, t_final]
    mu_floor : hard floor on |mu|; evaluations below it raise SingularMu
    """

    alpha0: float
    gamma: float
    mu0: float
    delta: float
    t_final: float
    n_samples: int = 2000
    mu_floor: float = 1e-9

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples}")
        if not self.t_final > 0.0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if not self.mu_floor > 0.0:
            raise ValueError("mu_floor must be positive")

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, self.n_samples)


@dataclass(frozen=True)
class ProtocolSample:
    """Protocol values at one instant."""

    t: float
    mu: float
    alpha: float
    omega_rabi: float
    omega: float
    epsilon: float
    theta: float


@dataclass
class ValidationReport:
    """Outcome of checking a protocol over its horizon.

    Failures are carried in the report rather than raised; `ok` is False
    iff mu crosses (or touches) zero inside [0, t_final].
    """

    ok: bool
    mu_zero_crossing: Optional[float]
    min_abs_mu: float
    max_abs_omega: float
    upsilon_report: object = None
    messages: list = field(default_factory=list)


def mu_at(params: ProtocolParams, t):
    """Adiabatic parameter mu(t) = mu0 + delta*t (pure affine evaluation)."""
    return params.mu0 + params.delta * np.asarray(t, dtype=float)


def _guard_mu(params: ProtocolParams, t, mu):
    bad = np.abs(mu) < params.mu_floor
    if np.any(bad):
        t_bad = np.asarray(t, dtype=float)[bad] if np.ndim(t) else t
        first = float(np.min(t_bad)) if np.ndim(t) else float(t)
        raise SingularMu(
            f"|mu| < {params.mu_floor:g} at t = {first:.6e} s; Omega diverges"
        )


def fields_at(params: ProtocolParams, t):
    """Drive components at time t.

    Returns (omega, epsilon, omega_rabi, alpha).  The phase convention is
    alpha(t)*t = alpha0*t + gamma*t**2, exactly as the chirp is generated.
    """
    t = np.asarray(t, dtype=float)
    mu = mu_at(params, t)
    _guard_mu(params, t, mu)
    alpha = params.alpha0 + params.gamma * t
    omega_rabi = -(params.alpha0 + 2.0 * params.gamma * t) / mu
    phase = alpha * t
    omega = omega_rabi * np.cos(phase)
    epsilon = omega_rabi * np.sin(phase)
    if t.ndim == 0:
        return float(omega), float(epsilon), float(omega_rabi), float(alpha)
    return omega, epsilon, omega_rabi, alpha


def omega_rabi_at(params: ProtocolParams, t):
    """Generalized Rabi frequency Omega(t); sign follows -(alpha0+2*gamma*t)/mu."""
    t = np.asarray(t, dtype=float)
    mu = mu_at(params, t)
    _guard_mu(params, t, mu)
    out = -(params.alpha0 + 2.0 * params.gamma * t) / mu
    return float(out) if t.ndim == 0 else out


def rabi_rate_at(params: ProtocolParams, t):
    """d(Omega)/dt in closed form: -(2*gamma*mu - delta*(alpha0+2*gamma*t))/mu^2."""
    t = np.asarray(t, dtype=float)
    mu = mu_at(params, t)
    _guard_mu(params, t, mu)
    num = 2.0 * params.gamma * mu - params.delta * (params.alpha0 + 2.0 * params.gamma * t)
    out = -num / (mu * mu)
    return float(out) if t.ndim == 0 else out


def _log1p_over_x(x):
    """log(1+x)/x, series-stabilized near 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-5
    safe = np.where(small, 1.0, x)
    series = 1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0
    return np.where(small, series, np.log1p(np.where(small, 0.0, x)) / safe)


def _one_minus_log1p_over_x2(x):
    """(x - log(1+x))/x^2, series-stabilized near 0 (-> 1/2)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-5
    safe = np.where(small, 1.0, x)
    series = 0.5 - x / 3.0 + x * x / 4.0 - x * x * x / 5.0
    val = (np.where(small, 0.0, x) - np.log1p(np.where(small, 0.0, x))) / (safe * safe)
    return np.where(small, series, val)


def theta_at(params: ProtocolParams, t):
    """Scaled time theta(t) = integral of Omega, in closed form.

    The antiderivative of -(alpha0+2*gamma*s)/(mu0+delta*s) is rational plus
    logarithm; it is evaluated through log1p-based helpers so the delta -> 0
    limit -(alpha0*t + gamma*t^2)/mu0 is reached smoothly without
    cancellation.  ``theta_by_quadrature`` is the independent check.
    """
    t = np.asarray(t, dtype=float)
    mu = mu_at(params, t)
    _guard_mu(params, t, mu)
    if np.any(mu * params.mu0 < 0.0):
        # endpoints regular but mu crossed zero inside (0, t)
        raise SingularMu("mu changes sign on the integration range")
    x = params.delta * t / params.mu0
    f1 = _log1p_over_x(x)
    f2 = _one_minus_log1p_over_x2(x)
    out = -(params.alpha0 * t / params.mu0) * f1 - (2.0 * params.gamma * t * t / params.mu0) * f2
    return float(out) if t.ndim == 0 else out


def theta_by_quadrature(params: ProtocolParams, t: float) -> float:
    """Adaptive-quadrature evaluation of theta(t); oracle for ``theta_at``."""
    val, _ = quad(
        lambda s: omega_rabi_at(params, s), 0.0, float(t),
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    return val


def sample_at(params: ProtocolParams, t: float) -> ProtocolSample:
    omega, epsilon, omega_rabi, alpha = fields_at(params, t)
    return ProtocolSample(
        t=float(t),
        mu=float(mu_at(params, t)),
        alpha=alpha,
        omega_rabi=omega_rabi,
        omega=omega,
        epsilon=epsilon,
        theta=float(theta_at(params, t)),
    )


def default_horizon(alpha0: float, gamma: float, mu0: float, periods: float = 10.0) -> float:
    """Horizon long enough for `periods` oscillations of the kappa*theta clock.

    Uses the delta = 0 member of the family, for which the oscillation phase
    is kappa(mu0) * |theta(t)| with theta(t) = -(alpha0*t + gamma*t^2)/mu0.
    """
    kappa0 = float(np.hypot(1.0, mu0))
    target = periods * TWO_PI / kappa0
    a = abs(gamma / mu0)
    b = abs(alpha0 / mu0)
    if a == 0.0:
        if b == 0.0:
            raise ValueError("alpha0 and gamma cannot both vanish")
        return target / b
    return (-b + np.sqrt(b * b + 4.0 * a * target)) / (2.0 * a)


def validate(params: ProtocolParams, include_upsilon: bool = True) -> ValidationReport:
    """Scan the horizon for mu zero crossings and summarize the drive.

    Reports (never raises): crossing time if mu(t) hits zero inside
    [0, t_final], minimum |mu|, maximum |Omega| over the valid part, and the
    inertial-parameter summary when requested and computable.
    """
    messages = []
    crossing = None
    if params.delta != 0.0:
        t_cross = -params.mu0 / params.delta
        if 0.0 <= t_cross <= params.t_final:
            crossing = float(t_cross)
            messages.append(
                f"mu crosses zero at t = {t_cross:.6e} s inside the horizon"
            )
    if abs(params.mu0) < params.mu_floor and crossing is None:
        crossing = 0.0
        messages.append("mu(0) is below the singularity floor")

    mu_ends = np.array([params.mu0, params.mu0 + params.delta * params.t_final])
    min_abs_mu = 0.0 if crossing is not None else float(np.min(np.abs(mu_ends)))

    if crossing is None:
        grid = params.time_grid()
        _, _, omega_rabi, _ = fields_at(params, grid)
        max_abs_omega = float(np.max(np.abs(omega_rabi)))
    else:
        max_abs_omega = float("inf")

    report = ValidationReport(
        ok=crossing is None,
        mu_zero_crossing=crossing,
        min_abs_mu=min_abs_mu,
        max_abs_omega=max_abs_omega,
        messages=messages,
    )
    if include_upsilon and crossing is None:
        from .inertial import inertial_parameter  # deferred: inertial imports protocol

        report.upsilon_report = inertial_parameter(params)
    return report
