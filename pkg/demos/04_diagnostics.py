#!/usr/bin/env python3
"""Protocol validation and the inertial validity diagnostic.

Walks the reference ramp set through ``validate``: zero-crossing detection
for ramps that drive mu through zero, the traversed |mu| range, and the
dimensionless validity parameter with its verdict.  Also shows the default
horizon rule and the phase bookkeeping for one ramp.
"""

import numpy as np

from inertial_tls import (
    ProtocolParams,
    default_horizon,
    dynamical_phase,
    geometric_phase_complex,
    phase_ledger,
    validate,
)

TWO_PI = 2 * np.pi
ALPHA0 = 6e3 * TWO_PI
GAMMA = 50e6 * TWO_PI


def params_for(ratio, t_final):
    return ProtocolParams(alpha0=ALPHA0, gamma=GAMMA, mu0=-1.0,
                          delta=ratio * ALPHA0, t_final=t_final, n_samples=400)


t_auto = default_horizon(ALPHA0, GAMMA, -1.0, periods=10.0)
print(f"default horizon (10 oscillation periods at zero ramp): {t_auto*1e3:.4f} ms")
print("reference horizon used below: 0.2000 ms\n")

print("ramp/alpha0   status      min|mu|   max|Omega|/2pi [kHz]   upsilon     verdict")
for ratio in (0.0, -0.01, 0.01, -0.05, 0.05, 0.1, -1.0):
    report = validate(params_for(ratio, 0.2e-3))
    ups = report.upsilon_report
    print(f"  {ratio:+5.2f}      {'ok' if report.ok else 'SINGULAR':8s}"
          f"  {report.min_abs_mu:7.3f}   {report.max_abs_omega/TWO_PI/1e3:12.1f}"
          f"          {ups.upsilon:9.2e}  {ups.verdict}")

# a positive ramp eventually drives mu through zero: flagged, not clamped
long_run = validate(params_for(0.05, 1e-3), include_upsilon=False)
print(f"\nramp +0.05*alpha0 on a 1 ms horizon: ok={long_run.ok}, "
      f"crossing at {long_run.mu_zero_crossing*1e3:.3f} ms")

# phase bookkeeping for one moderate ramp
p = params_for(-0.05, 0.2e-3)
ledger = phase_ledger(p, p.t_final)
print(f"\nramp -0.05*alpha0 accumulated phases at t_final:")
print(f"  dynamical (branch order 0, +kappa, -kappa): "
      f"{tuple(f'{x:+.3f}' for x in ledger.dynamical)}")
print(f"  connection integrals (purely imaginary, i.e. branch rescalings): "
      f"{tuple(f'{x.imag:+.4f}i' for x in ledger.geometric)}")
print(f"  +kappa branch dynamical phase via direct quadrature: "
      f"{dynamical_phase(p, p.t_final):.3f} rad")
print(f"  mu-weighted-scaling zero-branch connection: "
      f"{geometric_phase_complex(p, 1, p.t_final).imag:+.4f}i")
