"""Figures and gnuplot data files written next to the CSV reports."""
from __future__ import annotations

from pathlib import Path

import numpy as np

STYLE = {
    "figure.dpi": 100,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
}
REP_COLORS = {"A": "tab:blue", "B": "tab:orange"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure_size(scale=1.0, ratio=None):
    width = 7.0 * scale
    ratio = (np.sqrt(5.0) - 1.0) / 2.0 if ratio is None else ratio
    return width, width * ratio


def new_figure(nrows=1, ncols=1, scale=1.0, ratio=None):
    plt = _pyplot()
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(nrows, ncols, figsize=figure_size(scale, ratio),
                                 sharex=True, squeeze=False)
    return fig, axes


def save(fig, path) -> Path:
    plt = _pyplot()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def _break_wraps(y):
    # NaN at wrap points so the line is not drawn across the -pi/pi jump
    y = np.asarray(y, dtype=float).copy()
    jumps = np.flatnonzero(np.abs(np.diff(y)) > np.pi)
    y[jumps + 1] = np.nan
    return y


def plot_echo(series_by_rep: dict, path, title=None) -> Path:
    """Phase sum, imaginary phases, amplitudes and couplings for each representation."""
    from .echo import LOCK_TARGETS, wrap_phase

    fig, axes = new_figure(2, 2, scale=1.2, ratio=0.7)
    (ax_p, ax_im), (ax_amp, ax_c) = axes
    for tag, s in series_by_rep.items():
        c = REP_COLORS.get(tag)
        ax_p.plot(s.t, _break_wraps(wrap_phase(s.P)), color=c, label=f"rep {tag}")
        ax_p.axhline(LOCK_TARGETS[tag], color=c, ls=":", lw=0.8)
        ax_im.plot(s.t, s.theta[:, 1], color=c, label=f"Im θ+ ({tag})")
        ax_im.plot(s.t, s.theta[:, 3], color=c, ls="--", label=f"Im θ- ({tag})")
        ax_amp.plot(s.t, s.amp_plus, color=c, label=f"|ψ+| ({tag})")
        ax_amp.plot(s.t, s.amp_minus, color=c, ls="--", label=f"|ψ-| ({tag})")
        ax_c.plot(s.t, s.Cp, color=c, label=f"C+ ({tag})")
        ax_c.plot(s.t, s.Cm, color=c, ls="--", label=f"C- ({tag})")
    ax_p.set_ylabel("P = Re θ+ + Re θ- (wrapped)")
    ax_im.set_ylabel("Im θ±")
    ax_amp.set_ylabel("amplitude")
    ax_c.set_ylabel("coupling C±")
    for ax in (ax_amp, ax_c):
        ax.set_xlabel("t")
    for ax in axes.flat:
        ax.legend(loc="best")
    if title:
        fig.suptitle(title)
    return save(fig, path)


def plot_wave(traj, path, energy=None, title=None) -> Path:
    n = traj.samples.shape[1] // 2
    t = traj.times
    rows = 2 if energy is not None else 1
    fig, axes = new_figure(rows, 1, ratio=0.5 * rows)
    ax = axes[0, 0]
    for i in range(n):
        ax.plot(t, traj.samples[:, i], label=f"x_{i}")
    ax.set_ylabel("x_i(t)")
    if n <= 10:
        ax.legend(loc="best", ncol=min(n, 5))
    if energy is not None:
        ax_e = axes[1, 0]
        ax_e.plot(t, (energy - energy[0]) / (abs(energy[0]) or 1.0), color="k")
        ax_e.set_ylabel("relative energy drift")
    axes[-1, 0].set_xlabel("t")
    if title:
        ax.set_title(title)
    return save(fig, path)


def plot_projection(reference, projected: dict, path, title=None) -> Path:
    """Projected first-order trajectories against the direct wave solution."""
    n = reference.samples.shape[1] // 2
    t = reference.times
    fig, axes = new_figure(2, 1, ratio=0.9)
    ax, ax_err = axes[:, 0]
    for i in range(n):
        ax.plot(t, reference.samples[:, i], color="0.6", lw=2.0)
    for tag, traj in projected.items():
        x = traj.samples[: t.size]
        ax.plot(t, x[:, 0], color=REP_COLORS.get(tag), ls="--", label=f"projected rep {tag}, x_0")
        err = np.max(np.abs(x - reference.samples[:, :n]), axis=1)
        ax_err.semilogy(t, np.maximum(err, 1e-18), color=REP_COLORS.get(tag), label=f"rep {tag}")
    ax.set_ylabel("x_i(t)")
    ax.legend(loc="best")
    ax_err.set_ylabel("max |x_proj - x_wave|")
    ax_err.set_xlabel("t")
    ax_err.legend(loc="best")
    if title:
        ax.set_title(title)
    return save(fig, path)


def write_plot_data(out_dir, prefix: str, t, columns: dict) -> list[Path]:
    """One gnuplot-friendly ``t value`` file per observable."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, values in columns.items():
        path = out_dir / f"{prefix}_{name}.dat"
        with path.open("w") as fh:
            fh.write(f"# t {name}\n")
            for ti, vi in zip(t, values):
                fh.write(f"{float(ti)!r} {float(vi)!r}\n")
        paths.append(path)
    return paths
