"""Trajectory diagnostics: normalized energy, distances, sweeps and fits."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, List, Sequence

import numpy as np

from . import protocol as proto
from .errors import DegenerateInput, GridMismatch, ZeroInitialEnergy
from .exact import IntegratorConfig, Trajectory, integrate_liouville
from .inertial import inertial_propagate


@dataclass
class DistanceGrid:
    """Distances between inertial and exact solutions on a (delta, t) lattice.

    ``d`` has shape (n_times, n_deltas): one column per ramp rate.  Columns
    whose protocol failed validation are NaN and the failure message is kept
    in ``failures``.
    """

    delta_values: np.ndarray
    time_grid: np.ndarray
    d: np.ndarray
    base_params: proto.ProtocolParams
    failures: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


def normalized_energy(traj: Trajectory):
    """(t, h(t)/h(0)) for one trajectory."""
    h0 = traj.v[0, 0]
    if abs(h0) < 1e-14:
        raise ZeroInitialEnergy("initial energy expectation is numerically zero")
    return traj.t, traj.v[:, 0] / h0


def _check_common_grid(a: Trajectory, b: Trajectory):
    if len(a.t) != len(b.t) or not np.array_equal(a.t, b.t):
        raise GridMismatch("trajectories are sampled on different time grids")


def distance_series(a: Trajectory, b: Trajectory, normalized: bool = False):
    """Euclidean distance between (h, l, c) samples of two trajectories.

    ``normalized`` divides by |Omega(0)|/2 for cross-parameter comparisons.
    """
    _check_common_grid(a, b)
    d = np.sqrt(((a.v - b.v) ** 2).sum(axis=1))
    if normalized:
        d = d / (abs(a.omega_rabi[0]) / 2.0)
    return a.t, d


def distance_grid(base: proto.ProtocolParams, deltas: Sequence[float],
                  cfg: IntegratorConfig = IntegratorConfig()) -> DistanceGrid:
    """Inertial-vs-exact distance for each ramp rate in ``deltas``.

    Protocols that fail validation get a NaN column instead of aborting the
    sweep.
    """
    deltas = np.asarray(list(deltas), dtype=float)
    time_grid = base.time_grid()
    d = np.full((len(time_grid), len(deltas)), np.nan)
    failures = {}
    for j, delta in enumerate(deltas):
        params = replace(base, delta=float(delta))
        report = proto.validate(params, include_upsilon=False)
        if not report.ok:
            failures[float(delta)] = "; ".join(report.messages)
            continue
        omega0 = proto.omega_rabi_at(params, 0.0)
        v0 = np.array([-abs(omega0) / 2.0, 0.0, 0.0])
        exact = integrate_liouville(params, v0, cfg)
        inertial = inertial_propagate(params, v0, cfg)
        _, series = distance_series(inertial, exact)
        d[:, j] = series
    return DistanceGrid(delta_values=deltas, time_grid=time_grid, d=d,
                        base_params=base, failures=failures)


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Ordinary least squares line with r^2."""
    xs = np.asarray(list(xs), dtype=float)
    ys = np.asarray(list(ys), dtype=float)
    if len(xs) < 3 or len(xs) != len(ys):
        raise DegenerateInput("need at least 3 (x, y) pairs")
    if np.ptp(xs) == 0.0:
        raise DegenerateInput("xs are all equal")
    design = np.column_stack([xs, np.ones_like(xs)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - (slope * xs + intercept)
    ss_res = float((resid ** 2).sum())
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    if ss_tot == 0.0:
        r2 = 1.0  # constant data: the mean line is exact, residual is roundoff
    else:
        r2 = 1.0 - ss_res / ss_tot
    return FitResult(slope=float(slope), intercept=float(intercept),
                     r_squared=float(min(max(r2, 0.0), 1.0)))


def phase_space_export(trajs: Iterable[Trajectory]) -> List[tuple]:
    """Long-format rows (label, t, h, l, c) for 3D plotting."""
    trajs = list(trajs)
    if not trajs:
        return []
    first = trajs[0]
    for traj in trajs[1:]:
        _check_common_grid(first, traj)
    rows = []
    for traj in trajs:
        for i in range(len(traj.t)):
            rows.append((traj.label, float(traj.t[i]),
                         float(traj.v[i, 0]), float(traj.v[i, 1]), float(traj.v[i, 2])))
    return rows
