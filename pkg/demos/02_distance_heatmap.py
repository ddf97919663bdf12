#!/usr/bin/env python3
"""Breakdown map: distance between analytic and exact solutions over (delta, t).

The zero-ramp column vanishes identically (the eigenoperator solution is
exact there); away from it the distance grows roughly linearly in both time
and ramp magnitude.
"""

from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from inertial_tls import IntegratorConfig, ProtocolParams, distance_grid, linear_fit

TWO_PI = 2 * np.pi
ALPHA0 = 6e3 * TWO_PI

base = ProtocolParams(
    alpha0=ALPHA0, gamma=50e6 * TWO_PI, mu0=-1.0,
    delta=0.0, t_final=0.2e-3, n_samples=160,
)
ratios = np.linspace(-0.1, 0.1, 33)
grid = distance_grid(base, ratios * ALPHA0, IntegratorConfig(rel_tol=1e-9, abs_tol=1e-11))

fig, ax = plt.subplots(figsize=(7, 4.5))
mesh = ax.pcolormesh(grid.time_grid * 1e3, ratios, grid.d.T, shading="nearest",
                     cmap="viridis")
fig.colorbar(mesh, ax=ax, label="D")
ax.set_xlabel("t [ms]")
ax.set_ylabel("delta / alpha0")
ax.set_title("inertial-vs-exact distance; note the exact valley at delta = 0")
fig.tight_layout()
out = Path(__file__).parent / "output" / "distance_heatmap.png"
out.parent.mkdir(exist_ok=True)
fig.savefig(out, dpi=150)
print(f"wrote {out}")

# quantify the near-linear growth with |delta| at the end time
mask = ratios > 0
fit = linear_fit(ratios[mask] * ALPHA0, grid.d[-1, mask])
print(f"end-time distance vs delta (positive branch): r^2 = {fit.r_squared:.3f}")
zero_col = grid.d[:, np.argmin(np.abs(ratios))]
scale = abs(base.alpha0) / 2
print(f"zero-ramp column maximum: {zero_col.max()/scale:.3e} * Omega(0)/2 (solver roundoff)")
