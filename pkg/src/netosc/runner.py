"""Scenario dispatch: build the graph, run the checks, write the artifacts."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import algebra, dynamics, echo
from . import graph as gc
from . import io, plotting
from .config import ScenarioConfig
from .errors import ValidationError


@dataclass
class RunSummary:
    scenario: dict
    checks: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self):
        return {"scenario": self.scenario, "checks": self.checks,
                "passed": self.passed, "files": [str(p) for p in self.files],
                "duration_seconds": self.duration}


def load_graph(cfg: ScenarioConfig) -> gc.Graph:
    if cfg.complete is not None:
        return gc.complete_graph(*cfg.complete)
    return gc.read_edge_list(cfg.edge_list)


def initial_wave_state(cfg: ScenarioConfig, n: int) -> dynamics.WaveState:
    # default: unit displacement on node 0, at rest
    x0 = np.zeros(n) if cfg.x0 is None else np.asarray(cfg.x0, dtype=float)
    if cfg.x0 is None:
        x0[0] = 1.0
    v0 = np.zeros(n) if cfg.v0 is None else np.asarray(cfg.v0, dtype=float)
    if x0.shape != (n,) or v0.shape != (n,):
        raise ValidationError("x0/v0", f"must have length {n}")
    return dynamics.WaveState(x0, v0)


def _is_symmetric(m) -> bool:
    return bool(np.max(np.abs(m - m.T)) <= gc.SYMMETRY_TOL)


# ---------------------------------------------------------------- scenarios

def run_verify(cfg, g, summary):
    tol = cfg.tolerances
    a, b = algebra.matrix_a(), algebra.matrix_b()
    report = {"graph": {"n": g.n, "edges": len(g.edges), "uniform_degree": g.is_uniform_degree}}
    for name, (p, q) in {"ab": (a, b), "ba": (b, a)}.items():
        r = algebra.verify_representation(p, q, tol["algebra"])
        report[f"algebra_{name}"] = r.to_dict()
        summary.checks[f"algebra_{name}"] = r.passed
        summary.checks[f"algebra_{name}_exact"] = (
            r.anticommutator_deviation == r.first_square_deviation
            == r.second_square_deviation == 0.0)

    L = gc.laplacian(g)
    row_sums = float(np.max(np.abs(L.sum(axis=1))))
    report["laplacian_max_row_sum"] = row_sums
    summary.checks["laplacian_row_sums"] = row_sums < 1e-12

    H = gc.semi_normalized_laplacian(g)
    sqrtD = gc.sqrt_degree_matrix(g)
    ops = {tag: algebra.evolution_operator(H, sqrtD, tag) for tag in ("A", "B")}
    uniform = g.is_uniform_degree
    for tag, op in ops.items():
        dev = algebra.operator_square_diagnostic(op, L)
        report[f"operator_square_{tag}"] = {"deviation": dev, "gated": uniform}
        if uniform:
            summary.checks[f"operator_square_{tag}"] = dev < tol["operator_square"]
        summary.files.append(io.write_matrix_csv(cfg.out / f"operator_{tag}.csv", op.matrix))

    S = algebra.intertwiner(g.n)
    inter = float(np.max(np.abs(S @ ops["A"].matrix @ S - ops["B"].matrix)))
    report["intertwiner_deviation"] = inter
    summary.checks["intertwiner_exact"] = inter == 0.0

    if uniform and _is_symmetric(L):
        omega2_values = sorted({float(round(v, 9)) for v in
                                gc.spectral_decomposition(L).eigenvalues if v > 1e-9})
        d = float(gc.out_degrees(g)[0])
        worst = 0.0
        for w2 in omega2_values:
            for tag in ("A", "B"):
                ev = np.sort(np.linalg.eigvals(echo.block_matrix(w2, d, tag)).real)
                worst = max(worst, float(np.max(np.abs(ev - [-np.sqrt(w2), np.sqrt(w2)]))))
        report["block_eigenvalue_deviation"] = worst
        summary.checks["block_eigenvalues"] = worst < tol["block_eigenvalues"]
        for tag, op in ops.items():
            dev = float(np.max(np.abs(echo.assemble_from_blocks(g, tag) - op.matrix)))
            report[f"block_assembly_{tag}"] = dev
            summary.checks[f"block_assembly_{tag}"] = dev < tol["block_assembly"]

    report["checks"] = dict(summary.checks)
    summary.files.append(io.write_json(cfg.out / "verify.json", report))


def run_wave(cfg, g, summary):
    L = gc.laplacian(g)
    init = initial_wave_state(cfg, g.n)
    traj = dynamics.integrate_wave(L, init, cfg.dt, cfg.T)
    summary.files.append(io.write_wave_csv(cfg.out / "wave.csv", traj))
    report = {"n": g.n, "dt": cfg.dt, "T": cfg.T, "steps": traj.steps,
              "integrator": traj.metadata["integrator"]}
    energy = None
    if _is_symmetric(L):
        energy = dynamics.energy_series(traj, L)
        drift = dynamics.relative_energy_drift(traj, L)
        report["relative_energy_drift"] = drift
        summary.checks["energy_drift"] = drift < cfg.tolerances["energy_drift"]
    report["checks"] = dict(summary.checks)
    summary.files.append(io.write_json(cfg.out / "wave_report.json", report))
    t = traj.times
    if cfg.plot_data:
        cols = {f"x_{i}": traj.samples[:, i] for i in range(g.n)}
        if energy is not None:
            cols["energy"] = energy
        summary.files += plotting.write_plot_data(cfg.out / "plot_data", "wave", t, cols)
    if cfg.figures:
        summary.files.append(plotting.plot_wave(traj, cfg.out / "figures" / "wave.png",
                                                energy, title=f"wave equation, n={g.n}"))


def run_fundamental(cfg, g, summary):
    tol = cfg.tolerances
    L = gc.laplacian(g)
    H = gc.semi_normalized_laplacian(g)
    sqrtD = gc.sqrt_degree_matrix(g)
    init = initial_wave_state(cfg, g.n)
    uniform = g.is_uniform_degree
    reference = dynamics.integrate_wave(L, init, cfg.dt, cfg.T) if uniform else None
    report = {"n": g.n, "dt": cfg.dt, "T": cfg.T, "uniform_degree": uniform,
              "representations": {}}
    projected = {}
    for tag in cfg.reps:
        op = algebra.evolution_operator(H, sqrtD, tag)
        xhat0 = dynamics.lift_initial_condition(init.x, init.v, g, tag)
        traj = dynamics.integrate_fundamental(op, xhat0, cfg.dt, cfg.T)
        summary.files.append(io.write_doubled_csv(cfg.out / f"fundamental_{tag}.csv", traj))
        proj, residue = dynamics.projected_trajectory(traj)
        projected[tag] = proj
        roundtrip = float(np.max(np.abs(proj.samples[0] - init.x)))
        consistency = dynamics.verify_wave_consistency(proj, L, tol["wave_consistency"])
        entry = {"roundtrip_deviation": roundtrip, "imaginary_residue": residue,
                 "wave_consistency": consistency.to_dict(),
                 "operator_square_deviation": algebra.operator_square_diagnostic(op, L)}
        summary.checks[f"roundtrip_{tag}"] = roundtrip <= tol["roundtrip"]
        if uniform:
            summary.checks[f"wave_consistency_{tag}"] = consistency.passed
            rmse = float(np.sqrt(np.mean(
                (proj.samples - dynamics.wave_positions(reference)) ** 2)))
            entry["rmse_vs_wave"] = rmse
            summary.checks[f"wave_rmse_{tag}"] = rmse < tol["wave_rmse"]
        report["representations"][tag] = entry
    report["checks"] = dict(summary.checks)
    summary.files.append(io.write_json(cfg.out / "fundamental_report.json", report))
    if cfg.plot_data:
        for tag, proj in projected.items():
            cols = {f"x_{i}": proj.samples[:, i] for i in range(g.n)}
            summary.files += plotting.write_plot_data(
                cfg.out / "plot_data", f"fundamental_{tag}", proj.times, cols)
    if cfg.figures and reference is not None:
        summary.files.append(plotting.plot_projection(
            reference, projected, cfg.out / "figures" / "projection.png",
            title=f"projected first-order flow vs wave equation, n={g.n}"))


def _echo_outputs(cfg, out_dir, series_by_rep, summary, title):
    for tag, s in series_by_rep.items():
        summary.files.append(io.write_rows(out_dir / f"echo_{tag}.csv", echo.ECHO_COLUMNS,
                                           s.columns()))
        if cfg.plot_data:
            cols = dict(zip(echo.ECHO_COLUMNS[1:], s.columns()[:, 1:].T))
            summary.files += plotting.write_plot_data(out_dir / "plot_data", f"echo_{tag}",
                                                      s.t, cols)
    if cfg.figures:
        summary.files.append(plotting.plot_echo(series_by_rep, out_dir / "figures" / "echo.png",
                                                title=title))


def run_echo(cfg, g, summary):
    tol = cfg.tolerances
    omega2, d = echo.uniform_block_parameters(g)
    report = {"omega2": omega2, "d": d, "theta0": list(cfg.theta0), "dt": cfg.dt, "T": cfg.T,
              "representations": {}}
    series = {}
    for tag in cfg.reps:
        run = echo.run_representation(omega2, d, tag, cfg.theta0, cfg.dt, cfg.T,
                                      tol["lock_phase"], tol["lock_window"], tol["growth"],
                                      tol["psi_floor"])
        series[tag] = run.series
        report["representations"][tag] = {
            "lock": None if run.lock is None else run.lock.to_dict(),
            "growth": None if run.growth is None else run.growth.to_dict(),
            "psi_duality_deviation": run.duality_deviation,
            "min_psi_amplitude": run.min_psi_amplitude,
            "psi_duality_flagged": run.duality_flagged,
        }
        summary.checks[f"psi_duality_{tag}"] = (run.duality_flagged
                                                or run.duality_deviation < tol["psi_duality"])
        if run.growth is not None:
            summary.checks[f"growth_{tag}"] = run.growth.passed
    report["checks"] = dict(summary.checks)
    summary.files.append(io.write_json(cfg.out / "echo_report.json", report))
    _echo_outputs(cfg, cfg.out, series, summary, f"echo chamber, ω²={omega2:g}, d={d:g}")


def _scenario_for(cfg, n=None, w=None, omega2=None, d=None):
    tol = cfg.tolerances
    return echo.EchoScenario(
        n=n, w=w, omega2=omega2, d=d, theta0=tuple(cfg.theta0), dt=cfg.dt, T=cfg.T,
        tol_imag=tol["imag"], tol_amp=tol["amp"], tol_phase=tol["phase"],
        tol_lock=tol["lock_time"], lock_tol=tol["lock_phase"], lock_window=tol["lock_window"],
        growth_tol=tol["growth"], psi_tol=tol["psi_duality"], psi_floor=tol["psi_floor"])


def _compare_cell(cfg, scenario, out_dir, summary, prefix=""):
    report = echo.compare_representations(scenario)
    summary.files.append(io.write_json(out_dir / "comparison.json", report.to_dict()))
    for name, ok in report.checks.items():
        summary.checks[f"{prefix}{name}"] = ok
    p = report.parameters
    _echo_outputs(cfg, out_dir, {t: r.series for t, r in report.runs.items()}, summary,
                  f"rep A vs rep B, ω²={p['omega2']:g}, d={p['d']:g}")
    return report


def run_compare(cfg, g, summary):
    if cfg.complete is not None:
        scenario = _scenario_for(cfg, n=cfg.complete[0], w=cfg.complete[1])
    else:
        omega2, d = echo.uniform_block_parameters(g)
        scenario = _scenario_for(cfg, omega2=omega2, d=d)
    _compare_cell(cfg, scenario, cfg.out, summary)


def run_sweep(cfg, g, summary):
    cells = []
    for n in cfg.sweep_n:
        for w in cfg.sweep_w:
            cell_dir = cfg.out / f"n{n}_w{w!r}"
            report = _compare_cell(cfg, _scenario_for(cfg, n=n, w=w), cell_dir, summary,
                                   prefix=f"n{n}_w{w!r}/")
            d = report.to_dict()
            cells.append({"n": n, "w": w, "dir": cell_dir.name, "verdict": d["verdict"],
                          "lock_events": d["lock_events"], "max_deviations": d["max_deviations"]})
    summary.files.append(io.write_json(cfg.out / "sweep.json", {"cells": cells}))


DISPATCH = {
    "verify": run_verify,
    "wave": run_wave,
    "fundamental": run_fundamental,
    "echo": run_echo,
    "compare": run_compare,
    "sweep": run_sweep,
}


def run_scenario(cfg: ScenarioConfig) -> RunSummary:
    start = time.perf_counter()
    summary = RunSummary(cfg.echo())
    Path(cfg.out).mkdir(parents=True, exist_ok=True)
    g = None if cfg.scenario == "sweep" else load_graph(cfg)
    DISPATCH[cfg.scenario](cfg, g, summary)
    summary.duration = time.perf_counter() - start
    return summary
