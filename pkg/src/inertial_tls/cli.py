"""Command-line entry point: simulate, sweep, export figure data, validate.

Config is a JSON file with physical units (frequencies in kHz, times in ms);
the conversion to rad/s happens once here and the core stays unit-agnostic.
The chirp-rate key ``gamma_khz2`` is read as kHz^2, i.e. gamma =
2*pi*1e6*gamma_khz2 rad/s^2; a mega-Hz^2 reading of the same constant is
expressed by passing gamma_khz2 = 1e6 times larger.  All outputs are CSV
(RFC 4180) plus a JSON meta sidecar, byte-stable for a fixed config.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import protocol as proto
from .analysis import distance_grid, distance_series, normalized_energy, phase_space_export
from .errors import SingularMu, StepSizeUnderflow
from .exact import IntegratorConfig, integrate_liouville
from .inertial import adiabatic_reference, corrected_propagate, inertial_propagate

TWO_PI = 2.0 * np.pi

PAPER_DELTA_RATIOS = (-1.0, -0.05, -0.01, 0.01, 0.05, 0.1)
TRACE_COLUMNS = (
    "t", "theta", "mu", "Omega",
    "E_norm_exact", "E_norm_inertial", "E_norm_corrected", "E_norm_adiabatic",
    "D_inertial_exact",
)


@dataclass
class RunConfig:
    """Fully resolved run description (SI units)."""

    protocol: proto.ProtocolParams
    integrator: IntegratorConfig
    mode: str
    delta_ratios: List[float]
    output_dir: Path
    delta_list_given: bool = True
    include_geometric: bool = False
    seed: int = 0
    sweep_delta_range: tuple = (-0.1, 0.1)
    sweep_n_deltas: int = 41
    sweep_n_times: int = 200
    fig4_delta_ratios: List[float] = field(default_factory=lambda: [-0.01, -0.05])
    gamma_unit_note: str = ""


def load_config(path, mode: Optional[str] = None, out: Optional[str] = None,
                geometric: Optional[bool] = None,
                delta_ratios: Optional[List[float]] = None) -> RunConfig:
    """Read the JSON config and resolve units; CLI flags override fields."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))

    alpha0 = float(raw["alpha0_khz"]) * 1e3 * TWO_PI
    gamma = float(raw["gamma_khz2"]) * 1e6 * TWO_PI
    mu0 = float(raw["mu0"])
    t_final_ms = raw.get("t_final_ms")
    if t_final_ms is None:
        t_final = proto.default_horizon(alpha0, gamma, mu0)
    else:
        t_final = float(t_final_ms) * 1e-3
    base_ratio = float(raw.get("delta_over_alpha0", 0.0))
    params = proto.ProtocolParams(
        alpha0=alpha0,
        gamma=gamma,
        mu0=mu0,
        delta=base_ratio * alpha0,
        t_final=t_final,
        n_samples=int(raw.get("n_samples", 2000)),
    )

    integ = raw.get("integrator", {})
    cfg = IntegratorConfig(
        rel_tol=float(integ.get("rel_tol", 1e-10)),
        abs_tol=float(integ.get("abs_tol", 1e-12)),
    )

    delta_list_given = delta_ratios is not None or "delta_list_over_alpha0" in raw
    ratios = delta_ratios if delta_ratios is not None else raw.get(
        "delta_list_over_alpha0", [base_ratio]
    )
    sweep = raw.get("sweep", {})
    rng = sweep.get("delta_range_over_alpha0", [-0.1, 0.1])

    return RunConfig(
        protocol=params,
        integrator=cfg,
        mode=mode or raw.get("mode", "simulate"),
        delta_ratios=[float(r) for r in ratios],
        output_dir=Path(out or raw.get("output_dir", "out")),
        delta_list_given=delta_list_given,
        include_geometric=bool(geometric if geometric is not None
                               else raw.get("include_geometric", False)),
        seed=int(raw.get("seed", 0)),
        sweep_delta_range=(float(rng[0]), float(rng[1])),
        sweep_n_deltas=int(sweep.get("n_deltas", 41)),
        sweep_n_times=int(sweep.get("n_times", 200)),
        fig4_delta_ratios=[float(r) for r in raw.get("fig4_deltas_over_alpha0",
                                                     [-0.01, -0.05])],
        gamma_unit_note=(
            "gamma_khz2 interpreted as kHz^2 (gamma = 2*pi*1e6*gamma_khz2 rad/s^2); "
            "pass the value in 1e6 units for a MHz^2 reading"
        ),
    )


def _fmt(x) -> str:
    return repr(float(x))


def _delta_tag(ratio: float) -> str:
    return f"{ratio:g}"


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _params_dict(p: proto.ProtocolParams) -> dict:
    return {
        "alpha0_rad_s": p.alpha0,
        "gamma_rad_s2": p.gamma,
        "mu0": p.mu0,
        "delta_per_s": p.delta,
        "t_final_s": p.t_final,
        "n_samples": p.n_samples,
        "mu_floor": p.mu_floor,
    }


def _ground_v0(params: proto.ProtocolParams) -> np.ndarray:
    omega0 = proto.omega_rabi_at(params, 0.0)
    return np.array([-abs(omega0) / 2.0, 0.0, 0.0])


def _trace_rows(cfg: RunConfig, params: proto.ProtocolParams):
    v0 = _ground_v0(params)
    exact = integrate_liouville(params, v0, cfg.integrator)
    inertial = inertial_propagate(params, v0, cfg.integrator,
                                  include_geometric=cfg.include_geometric)
    corrected = corrected_propagate(params, v0, cfg.integrator)
    adiabatic = adiabatic_reference(params, v0, cfg.integrator)
    _, e_exact = normalized_energy(exact)
    _, e_inertial = normalized_energy(inertial)
    _, e_corrected = normalized_energy(corrected)
    _, e_adiabatic = normalized_energy(adiabatic)
    _, dist = distance_series(inertial, exact)
    rows = []
    for i in range(len(exact.t)):
        rows.append([
            _fmt(exact.t[i]), _fmt(exact.theta[i]), _fmt(exact.mu[i]),
            _fmt(exact.omega_rabi[i]),
            _fmt(e_exact[i]), _fmt(e_inertial[i]), _fmt(e_corrected[i]),
            _fmt(e_adiabatic[i]), _fmt(dist[i]),
        ])
    return rows, (exact, inertial, adiabatic)


def _per_delta_meta(params: proto.ProtocolParams) -> dict:
    report = proto.validate(params)
    entry = {
        "ok": report.ok,
        "mu_zero_crossing_s": report.mu_zero_crossing,
        "min_abs_mu": report.min_abs_mu,
        "max_abs_omega_rad_s": report.max_abs_omega,
        "messages": report.messages,
    }
    if report.upsilon_report is not None:
        entry["upsilon"] = report.upsilon_report.upsilon
        entry["verdict"] = report.upsilon_report.verdict
    return entry


def run_simulate(cfg: RunConfig, file_prefix: str = "trace",
                 mode_label: str = "simulate") -> int:
    """Write one trace CSV per requested ramp rate plus a meta sidecar."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    failures = {}
    resolved = {}
    written = []
    for ratio in cfg.delta_ratios:
        params = replace(cfg.protocol, delta=ratio * cfg.protocol.alpha0)
        tag = _delta_tag(ratio)
        resolved[tag] = _per_delta_meta(params)
        if not resolved[tag]["ok"]:
            failures[tag] = "; ".join(resolved[tag]["messages"])
            continue
        try:
            rows, _ = _trace_rows(cfg, params)
        except (SingularMu, StepSizeUnderflow) as exc:
            failures[tag] = str(exc)
            continue
        out = cfg.output_dir / f"{file_prefix}_{tag}.csv"
        _write_csv(out, TRACE_COLUMNS, rows)
        written.append(out.name)
    meta = {
        "mode": mode_label,
        "unit_interpretation": cfg.gamma_unit_note,
        "params_si": _params_dict(cfg.protocol),
        "delta_over_alpha0": cfg.delta_ratios,
        "include_geometric": cfg.include_geometric,
        "seed": cfg.seed,
        "integrator": {"rel_tol": cfg.integrator.rel_tol,
                       "abs_tol": cfg.integrator.abs_tol},
        "per_delta": resolved,
        "failures": failures,
        "written": written,
    }
    _write_json(cfg.output_dir / "meta.json", meta)
    for tag, msg in failures.items():
        print(f"error: delta/alpha0 = {tag}: {msg}", file=sys.stderr)
    return 1 if failures else 0


def _sweep_grid(cfg: RunConfig, ratios: Optional[List[float]] = None):
    base = replace(cfg.protocol, n_samples=cfg.sweep_n_times)
    if ratios is None:
        lo, hi = cfg.sweep_delta_range
        ratios = list(np.linspace(lo, hi, cfg.sweep_n_deltas))
    deltas = [r * cfg.protocol.alpha0 for r in ratios]
    grid = distance_grid(base, deltas, cfg.integrator)
    return grid, ratios


def _grid_rows(grid, ratios):
    rows = []
    for j, ratio in enumerate(ratios):
        for i, t in enumerate(grid.time_grid):
            rows.append([_fmt(ratio), _fmt(t), _fmt(grid.d[i, j])])
    return rows


def run_sweep(cfg: RunConfig, grid_name: str = "distance_grid.csv",
              meta_name: str = "grid_meta.json", use_range: bool = False) -> int:
    """Distance-vs-(delta, t) lattice in long CSV format.

    An explicit delta list is swept as given (a single entry degenerates to
    one distance series); otherwise, or with ``use_range``, the configured
    delta range is discretized.
    """
    if cfg.delta_list_given and not cfg.delta_ratios:
        print("error: sweep mode needs a nonempty delta list", file=sys.stderr)
        return 2
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    ratios = cfg.delta_ratios if (cfg.delta_list_given and not use_range) else None
    grid, used = _sweep_grid(cfg, ratios)
    _write_csv(cfg.output_dir / grid_name, ("delta", "t", "D"), _grid_rows(grid, used))
    meta = {
        "mode": "sweep",
        "unit_interpretation": cfg.gamma_unit_note,
        "params_si": _params_dict(grid.base_params),
        "delta_over_alpha0": used,
        "integrator": {"rel_tol": cfg.integrator.rel_tol,
                       "abs_tol": cfg.integrator.abs_tol},
        "failed_cells": {f"{k:g}": v for k, v in grid.failures.items()},
        "written": [grid_name],
    }
    _write_json(cfg.output_dir / meta_name, meta)
    return 0


def run_figures(cfg: RunConfig) -> int:
    """Emit the CSV sets consumed by the figure-rendering component."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    status = run_simulate(cfg, file_prefix="fig2", mode_label="figures")
    sweep_status = run_sweep(cfg, grid_name="fig3_grid.csv", meta_name="fig3_meta.json",
                             use_range=True)

    rows = []
    fig4_failures = {}
    for ratio in cfg.fig4_delta_ratios:
        params = replace(cfg.protocol, delta=ratio * cfg.protocol.alpha0)
        report = proto.validate(params, include_upsilon=False)
        if not report.ok:
            fig4_failures[_delta_tag(ratio)] = "; ".join(report.messages)
            continue
        v0 = _ground_v0(params)
        trajs = [
            integrate_liouville(params, v0, cfg.integrator),
            inertial_propagate(params, v0, cfg.integrator,
                               include_geometric=cfg.include_geometric),
            adiabatic_reference(params, v0, cfg.integrator),
        ]
        for label, t, h, l, c in phase_space_export(trajs):
            rows.append([label, _fmt(ratio), _fmt(t), _fmt(h), _fmt(l), _fmt(c)])
    _write_csv(cfg.output_dir / "fig4_trajectories.csv",
               ("label", "delta_over_alpha0", "t", "h", "l", "c"), rows)
    if fig4_failures:
        for tag, msg in fig4_failures.items():
            print(f"error: fig4 delta/alpha0 = {tag}: {msg}", file=sys.stderr)
    return 1 if (status or sweep_status or fig4_failures) else 0


def run_validate(cfg: RunConfig) -> int:
    """Per-delta validation report, printed and written as JSON."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    payload = {"params_si": _params_dict(cfg.protocol), "per_delta": {}}
    for ratio in cfg.delta_ratios:
        params = replace(cfg.protocol, delta=ratio * cfg.protocol.alpha0)
        entry = _per_delta_meta(params)
        payload["per_delta"][_delta_tag(ratio)] = entry
        state = "ok" if entry["ok"] else "SINGULAR"
        ups = entry.get("upsilon")
        ups_txt = f" upsilon={ups:.3e} ({entry['verdict']})" if ups is not None else ""
        print(f"delta/alpha0 = {ratio:g}: {state}"
              f" min|mu|={entry['min_abs_mu']:.3g}{ups_txt}")
    _write_json(cfg.output_dir / "validation.json", payload)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="inertial-tls",
        description="Simulate a chirp-driven two-level system and export "
                    "energy traces, distance sweeps and trajectory data.",
    )
    parser.add_argument("config", help="JSON config file")
    parser.add_argument("--mode", choices=["simulate", "sweep", "figures", "validate"],
                        default=None, help="override the config mode")
    parser.add_argument("--out", default=None, help="override the output directory")
    parser.add_argument("--geometric", action="store_true", default=None,
                        help="include the eigenvector connection factors")
    parser.add_argument("--delta-over-alpha0", default=None,
                        help="comma-separated ramp rates in units of alpha0")
    args = parser.parse_args(argv)

    ratios = None
    if args.delta_over_alpha0:
        ratios = [float(x) for x in args.delta_over_alpha0.split(",") if x.strip()]

    try:
        cfg = load_config(args.config, mode=args.mode, out=args.out,
                          geometric=args.geometric, delta_ratios=ratios)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot load config: {exc}", file=sys.stderr)
        return 2

    runners = {
        "simulate": run_simulate,
        "sweep": run_sweep,
        "figures": run_figures,
        "validate": run_validate,
    }
    runner = runners.get(cfg.mode)
    if runner is None:
        print(f"error: unknown mode {cfg.mode!r}", file=sys.stderr)
        return 2
    return runner(cfg)


if __name__ == "__main__":
    sys.exit(main())
