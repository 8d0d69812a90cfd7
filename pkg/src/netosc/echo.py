"""Echo-chamber dynamics on a saturated complete subnetwork.

With uniform degree ``d`` every nonzero Laplacian eigenvalue ``omega2``
yields the same 2x2 block ``M``; the spinor ``psi = (psi+, psi-)`` obeys
``i dpsi/dt = M psi`` and is parameterized as ``psi+- = exp(-+ i theta+-)``.
Phase sum ``P = Re theta+ + Re theta-`` plays the role of a Kuramoto phase
difference; ``Im theta+-`` carry the amplitudes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import graph as gc
from .algebra import SPINOR_FLIP, representation
from .errors import (
    AmplitudeUnderflow,
    NoLockWindow,
    NonFiniteBlowup,
    NonPositiveDegree,
    NonPositiveParameter,
)
from .integrators import Trajectory, rk4_linear, step_count

DEFAULT_THETA0 = (0.1, 0.0, 0.2, 0.0)
EPS_PSI = 1e-6
LOCK_TARGETS = {"A": math.pi / 2, "B": -math.pi / 2}
THETA_COLUMNS = ("re_theta_plus", "im_theta_plus", "re_theta_minus", "im_theta_minus")
ECHO_COLUMNS = ("t",) + THETA_COLUMNS + ("P", "S", "C_plus", "C_minus", "amp_plus", "amp_minus")


def wrap_phase(x):
    """Map angles into ``(-pi, pi]``."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


def _rates(omega2: float, d: float) -> tuple[float, float]:
    root = math.sqrt(d)
    return (omega2 + d) / (2 * root), (omega2 - d) / (2 * root)


def block_matrix(omega2: float, d: float, rep) -> np.ndarray:
    """Block for one Laplacian eigenvalue; ``omega2 = 0`` gives the nilpotent zero mode."""
    rep = representation(rep)
    alpha, beta = _rates(omega2, d)
    M = np.array([[alpha, beta], [-beta, -alpha]])
    return M if rep.tag == "A" else SPINOR_FLIP @ M @ SPINOR_FLIP


@dataclass(frozen=True)
class BlockSystem:
    omega2: float
    d: float
    rep: str
    matrix: np.ndarray

    @property
    def omega(self) -> float:
        return math.sqrt(self.omega2)


def block_system(omega2: float, d: float, rep) -> BlockSystem:
    if not omega2 > 0:
        raise NonPositiveParameter(f"omega2 must be positive, got {omega2!r}")
    if not d > 0:
        raise NonPositiveParameter(f"d must be positive, got {d!r}")
    tag = representation(rep).tag
    return BlockSystem(float(omega2), float(d), tag, block_matrix(omega2, d, tag))


def uniform_block_parameters(g: gc.Graph, tol: float = 1e-9) -> tuple[float, float]:
    """``(omega2, d)`` for a uniform-degree graph whose nonzero spectrum is one value."""
    d = gc.out_degrees(g)
    if not np.all(d == d[0]) or d[0] <= 0:
        raise ValueError("echo-chamber reduction needs a uniform positive out-degree")
    eigs = gc.spectral_decomposition(gc.laplacian(g)).eigenvalues
    nonzero = eigs[np.abs(eigs) > tol]
    if nonzero.size == 0 or np.ptp(nonzero) > tol * max(1.0, nonzero.max()):
        raise ValueError(f"nonzero Laplacian spectrum is not degenerate: {nonzero}")
    return float(nonzero.mean()), float(d[0])


def assemble_from_blocks(g: gc.Graph, rep) -> np.ndarray:
    """Rebuild the doubled operator from per-eigenvalue blocks in the H eigenbasis."""
    d = float(gc.out_degrees(g)[0])
    H = gc.semi_normalized_laplacian(g)
    dec = gc.spectral_decomposition(H)
    Q = np.kron(dec.basis, np.eye(2))
    blocks = np.zeros((2 * g.n, 2 * g.n))
    for k, h in enumerate(dec.eigenvalues):
        # eigenvalue of H is omega2 / sqrt(d)
        blocks[2 * k:2 * k + 2, 2 * k:2 * k + 2] = block_matrix(h * math.sqrt(d), d, rep)
    return Q @ blocks @ Q.T


# ---------------------------------------------------------------- psi / theta

def psi_from_theta(theta) -> np.ndarray:
    """``(exp(-i theta+), exp(+i theta-))`` for rows ``(Re+, Im+, Re-, Im-)``."""
    th = np.asarray(theta, dtype=float)
    tp = th[..., 0] + 1j * th[..., 1]
    tm = th[..., 2] + 1j * th[..., 3]
    return np.stack([np.exp(-1j * tp), np.exp(1j * tm)], axis=-1)


def integrate_psi(block: BlockSystem, psi0, dt: float = 1e-3, T: float = 10.0) -> Trajectory:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (2,):
        raise ValueError(f"psi0 must be a 2-vector, got shape {psi0.shape}")
    samples = rk4_linear(-1j * block.matrix, psi0, dt, step_count(dt, T))
    return Trajectory(0.0, dt, samples,
                      {"kind": "psi", "representation": block.rep, "integrator": "rk4",
                       "omega2": block.omega2, "d": block.d})


def theta_from_psi(psi_traj: Trajectory, eps: float = EPS_PSI,
                   reference: Optional[Sequence[float]] = None) -> Trajectory:
    """Invert the exponential parameterization along a psi trajectory.

    Real parts are unwrapped so consecutive samples differ by less than pi.
    ``reference`` picks the 2*pi branch of the first sample (nearest to it);
    otherwise the principal branch is used.
    """
    psi = np.asarray(psi_traj.samples)
    mags = np.abs(psi)
    if mags.min() <= eps:
        k = int(np.argmin(mags.min(axis=1)))
        raise AmplitudeUnderflow(
            f"|psi| = {mags.min():.3e} <= {eps} at sample {k}; logarithm branch unreliable")
    re_p = -np.unwrap(np.angle(psi[:, 0]))
    re_m = np.unwrap(np.angle(psi[:, 1]))
    if reference is not None:
        two_pi = 2 * np.pi
        re_p += two_pi * np.round((reference[0] - re_p[0]) / two_pi)
        re_m += two_pi * np.round((reference[2] - re_m[0]) / two_pi)
    theta = np.column_stack([re_p, np.log(mags[:, 0]), re_m, -np.log(mags[:, 1])])
    return Trajectory(psi_traj.t0, psi_traj.dt, theta,
                      dict(psi_traj.metadata, kind="theta", integrator="psi-inversion"))


def integrate_theta(omega2: float, d: float, rep, theta0=DEFAULT_THETA0,
                    dt: float = 1e-3, T: float = 10.0) -> Trajectory:
    """RK4 on the four real phase equations.

    Representation B flips the sign of every coupling term relative to A.
    """
    if not d > 0:
        raise NonPositiveParameter(f"d must be positive, got {d!r}")
    tag = representation(rep).tag
    sign = 1.0 if tag == "A" else -1.0
    alpha, beta = _rates(omega2, d)
    steps = step_count(dt, T)
    exp, cos, sin, isfinite = math.exp, math.cos, math.sin, math.isfinite

    def rhs(rp, ip, rm, im):
        cp = beta * exp(-(ip + im))
        cm = beta * exp(ip + im)
        c = cos(rp + rm)
        s = sin(rp + rm)
        return (alpha + sign * cp * c, sign * cp * s,
                alpha + sign * cm * c, -sign * cm * s)

    out = np.empty((steps + 1, 4))
    y = tuple(float(v) for v in theta0)
    if len(y) != 4:
        raise ValueError("theta0 must be (Re theta+, Im theta+, Re theta-, Im theta-)")
    out[0] = y
    h, h2, h6 = dt, 0.5 * dt, dt / 6.0
    for k in range(1, steps + 1):
        a0, a1, a2, a3 = y
        k1 = rhs(a0, a1, a2, a3)
        k2 = rhs(a0 + h2 * k1[0], a1 + h2 * k1[1], a2 + h2 * k1[2], a3 + h2 * k1[3])
        k3 = rhs(a0 + h2 * k2[0], a1 + h2 * k2[1], a2 + h2 * k2[2], a3 + h2 * k2[3])
        k4 = rhs(a0 + h * k3[0], a1 + h * k3[1], a2 + h * k3[2], a3 + h * k3[3])
        y = (a0 + h6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
             a1 + h6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
             a2 + h6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]),
             a3 + h6 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3]))
        if not all(isfinite(v) for v in y):
            raise NonFiniteBlowup(k)
        out[k] = y
    return Trajectory(0.0, dt, out,
                      {"kind": "theta", "representation": tag, "integrator": "rk4",
                       "omega2": float(omega2), "d": float(d)})


def coupling_C(omega2: float, d: float, S):
    if not d > 0:
        raise NonPositiveDegree(f"d must be positive, got {d!r}")
    _, beta = _rates(omega2, d)
    S = np.asarray(S, dtype=float)
    cp, cm = beta * np.exp(-S), beta * np.exp(S)
    if cp.ndim == 0:
        return float(cp), float(cm)
    return cp, cm


# ---------------------------------------------------------------- observables

@dataclass(frozen=True)
class ObservableSeries:
    t: np.ndarray
    theta: np.ndarray  # columns Re+, Im+, Re-, Im-
    P: np.ndarray
    S: np.ndarray
    Cp: np.ndarray
    Cm: np.ndarray
    amp_plus: np.ndarray
    amp_minus: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0

    def columns(self) -> np.ndarray:
        """Rows in the order of ``ECHO_COLUMNS``."""
        return np.column_stack([self.t, self.theta, self.P, self.S, self.Cp, self.Cm,
                                self.amp_plus, self.amp_minus])


def observables(traj: Trajectory, omega2: float, d: float) -> ObservableSeries:
    th = np.asarray(traj.samples, dtype=float)
    P = th[:, 0] + th[:, 2]
    S = th[:, 1] + th[:, 3]
    cp, cm = coupling_C(omega2, d, S)
    return ObservableSeries(traj.times, th, P, S, np.atleast_1d(cp), np.atleast_1d(cm),
                            np.exp(th[:, 1]), np.exp(-th[:, 3]),
                            dict(traj.metadata, omega2=float(omega2), d=float(d)))


@dataclass(frozen=True)
class LockEvent:
    time: float  # start of the first qualifying locked run
    value: float  # P at that time
    end_time: float  # last sample of the same continuous run
    target: float
    start_index: int
    end_index: int

    def to_dict(self):
        return {"time": self.time, "value": self.value, "end_time": self.end_time,
                "target": self.target}


def detect_phase_lock(series: ObservableSeries, rep, tol: float = 0.05,
                      window: float = 1.0) -> Optional[LockEvent]:
    """Earliest time from which ``P`` stays within ``tol`` of the target for ``window``."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    dt = series.dt
    if dt > 0 and window < 10 * dt * (1 - 1e-12):
        raise ValueError(f"window {window} shorter than 10*dt = {10 * dt}")
    target = LOCK_TARGETS[representation(rep).tag]
    inside = np.abs(wrap_phase(series.P - target)) < tol
    # boundaries of runs of consecutive True samples
    padded = np.concatenate([[False], inside, [False]]).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    for i, j in zip(starts, ends):
        if series.t[j] - series.t[i] >= window - 1e-9 * max(dt, 1e-300):
            return LockEvent(float(series.t[i]), float(series.P[i]), float(series.t[j]),
                             target, int(i), int(j))
    return None


@dataclass(frozen=True)
class GrowthReport:
    deviation_plus: float
    deviation_minus: float
    tol: float
    amp_plus_nondecreasing: bool
    amp_minus_nondecreasing: bool
    window: tuple[float, float]

    @property
    def max_deviation(self) -> float:
        return max(self.deviation_plus, self.deviation_minus)

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def to_dict(self):
        return {"deviation_plus": self.deviation_plus,
                "deviation_minus": self.deviation_minus,
                "max_deviation": self.max_deviation, "tol": self.tol,
                "amp_plus_nondecreasing": self.amp_plus_nondecreasing,
                "amp_minus_nondecreasing": self.amp_minus_nondecreasing,
                "window": list(self.window), "passed": self.passed}


def _nondecreasing(x: np.ndarray) -> bool:
    slack = 1e-12 * max(1.0, float(np.max(np.abs(x))))
    return bool(np.all(np.diff(x) >= -slack))


def growth_rate_check(series: ObservableSeries, lock: Optional[LockEvent],
                      tol: float = 1e-3) -> GrowthReport:
    """Compare ``d Im theta+-/dt`` with ``+-C+-`` over the locked run."""
    if lock is None:
        raise NoLockWindow("growth relation is only checked on a detected lock window")
    n = series.t.size
    lo, hi = max(lock.start_index, 1), min(lock.end_index, n - 2)
    if hi < lo:
        raise NoLockWindow("lock window has no interior samples for central differences")
    dt = series.dt
    idx = np.arange(lo, hi + 1)
    d_ip = (series.theta[idx + 1, 1] - series.theta[idx - 1, 1]) / (2 * dt)
    d_im = (series.theta[idx + 1, 3] - series.theta[idx - 1, 3]) / (2 * dt)
    win = slice(lock.start_index, lock.end_index + 1)
    return GrowthReport(
        float(np.max(np.abs(d_ip - series.Cp[idx]))),
        float(np.max(np.abs(d_im + series.Cm[idx]))),
        float(tol),
        _nondecreasing(series.amp_plus[win]),
        _nondecreasing(series.amp_minus[win]),
        (lock.time, lock.end_time),
    )


# ---------------------------------------------------------------- comparison

@dataclass
class EchoScenario:
    """Either a complete graph ``(n, w)`` or explicit block parameters ``(omega2, d)``."""

    n: Optional[int] = None
    w: Optional[float] = None
    omega2: Optional[float] = None
    d: Optional[float] = None
    theta0: Sequence[float] = DEFAULT_THETA0
    theta0_b: Optional[Sequence[float]] = None  # None: derive from theta0 via the intertwiner
    dt: float = 1e-3
    T: float = 10.0
    tol_imag: float = 1e-8
    tol_amp: float = 1e-8
    tol_phase: float = 1e-8
    tol_lock: float = 1e-3
    lock_tol: float = 0.05
    lock_window: float = 1.0
    growth_tol: float = 1e-3
    psi_tol: float = 1e-6
    psi_floor: float = 1e-3

    def block_parameters(self) -> tuple[float, float]:
        if self.n is not None and self.w is not None:
            return uniform_block_parameters(gc.complete_graph(self.n, self.w))
        if self.omega2 is not None and self.d is not None:
            return float(self.omega2), float(self.d)
        raise ValueError("scenario needs (n, w) or (omega2, d)")

    def intertwined_theta0(self) -> tuple[float, ...]:
        """psi- -> -psi- under diag(1, -1), i.e. Re theta- shifted by pi."""
        t = tuple(float(v) for v in self.theta0)
        return (t[0], t[1], t[2] + math.pi, t[3])

    def parameters(self) -> dict:
        omega2, d = self.block_parameters()
        return {"n": self.n, "w": self.w, "omega2": omega2, "d": d,
                "theta0": [float(v) for v in self.theta0],
                "theta0_b": [float(v) for v in self.theta0_b_actual()],
                "dt": self.dt, "T": self.T}

    def theta0_b_actual(self):
        return self.intertwined_theta0() if self.theta0_b is None else tuple(self.theta0_b)


@dataclass
class RepresentationRun:
    rep: str
    theta: Trajectory
    series: ObservableSeries
    lock: Optional[LockEvent]
    growth: Optional[GrowthReport]
    duality_deviation: Optional[float]
    min_psi_amplitude: float
    duality_flagged: bool
    psi: Trajectory


@dataclass
class ComparisonReport:
    parameters: dict
    deviations: dict
    tolerances: dict
    runs: dict
    checks: dict

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())

    @property
    def violations(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    def to_dict(self) -> dict:
        runs = {}
        for tag, r in self.runs.items():
            runs[tag] = {
                "lock": None if r.lock is None else r.lock.to_dict(),
                "growth": None if r.growth is None else r.growth.to_dict(),
                "psi_duality_deviation": r.duality_deviation,
                "min_psi_amplitude": r.min_psi_amplitude,
                "psi_duality_flagged": r.duality_flagged,
            }
        return {
            "scenario": self.parameters,
            "max_deviations": self.deviations,
            "tolerances": self.tolerances,
            "lock_events": {tag: runs[tag]["lock"] for tag in runs},
            "no_lock": all(r.lock is None for r in self.runs.values()),
            "representations": runs,
            "checks": self.checks,
            "violations": self.violations,
            "verdict": "pass" if self.verdict else "fail",
        }


def run_representation(omega2: float, d: float, rep, theta0, dt: float, T: float,
                       lock_tol: float = 0.05, lock_window: float = 1.0,
                       growth_tol: float = 1e-3, psi_floor: float = 1e-3) -> RepresentationRun:
    """Theta integration plus its psi-space cross-check for one representation."""
    tag = representation(rep).tag
    theta = integrate_theta(omega2, d, tag, theta0, dt, T)
    series = observables(theta, omega2, d)
    lock = detect_phase_lock(series, tag, lock_tol, lock_window)
    growth = growth_rate_check(series, lock, growth_tol) if lock is not None else None

    psi = integrate_psi(BlockSystem(omega2, d, tag, block_matrix(omega2, d, tag)),
                        psi_from_theta(theta0), dt, T)
    min_amp = float(np.abs(psi.samples).min())
    flagged = min_amp <= psi_floor
    duality = float(np.max(np.abs(psi_from_theta(theta.samples) - psi.samples)))
    return RepresentationRun(tag, theta, series, lock, growth, duality, min_amp, flagged, psi)


def compare_representations(scenario: EchoScenario) -> ComparisonReport:
    omega2, d = scenario.block_parameters()
    common = dict(lock_tol=scenario.lock_tol, lock_window=scenario.lock_window,
                  growth_tol=scenario.growth_tol, psi_floor=scenario.psi_floor)
    a = run_representation(omega2, d, "A", scenario.theta0, scenario.dt, scenario.T, **common)
    b = run_representation(omega2, d, "B", scenario.theta0_b_actual(), scenario.dt,
                           scenario.T, **common)

    sa, sb = a.series, b.series
    dev = {
        "im_theta_plus": float(np.max(np.abs(sa.theta[:, 1] - sb.theta[:, 1]))),
        "im_theta_minus": float(np.max(np.abs(sa.theta[:, 3] - sb.theta[:, 3]))),
        "amp_plus": float(np.max(np.abs(sa.amp_plus - sb.amp_plus))),
        "amp_minus": float(np.max(np.abs(sa.amp_minus - sb.amp_minus))),
        "phase_offset": float(np.max(np.abs(wrap_phase(sb.P - sa.P - math.pi)))),
        "psi_conjugation": float(np.max(np.abs(b.psi.samples - a.psi.samples @ SPINOR_FLIP))),
    }
    tol = {"imag": scenario.tol_imag, "amp": scenario.tol_amp, "phase": scenario.tol_phase,
           "lock_time": scenario.tol_lock, "lock_phase": scenario.lock_tol,
           "lock_window": scenario.lock_window, "growth": scenario.growth_tol,
           "psi_duality": scenario.psi_tol, "psi_floor": scenario.psi_floor}

    checks = {
        "imag_parts_equal": max(dev["im_theta_plus"], dev["im_theta_minus"]) < scenario.tol_imag,
        "amplitudes_equal": max(dev["amp_plus"], dev["amp_minus"]) < scenario.tol_amp,
        "phase_offset_pi": dev["phase_offset"] < scenario.tol_phase,
    }
    if a.lock is None and b.lock is None:
        checks["lock_events_match"] = True
    elif a.lock is None or b.lock is None:
        checks["lock_events_match"] = False
    else:
        checks["lock_events_match"] = (
            abs(wrap_phase(a.lock.value - LOCK_TARGETS["A"])) < scenario.lock_tol
            and abs(wrap_phase(b.lock.value - LOCK_TARGETS["B"])) < scenario.lock_tol
            and abs(a.lock.time - b.lock.time) < scenario.tol_lock)
    if a.growth is not None and b.growth is not None:
        dev["growth_between_reps"] = abs(a.growth.max_deviation - b.growth.max_deviation)
        checks["growth_relation"] = (a.growth.passed and b.growth.passed
                                     and dev["growth_between_reps"] < scenario.tol_imag)
    checks["psi_duality"] = all(
        r.duality_flagged or r.duality_deviation < scenario.psi_tol for r in (a, b))

    return ComparisonReport(scenario.parameters(), dev, tol, {"A": a, "B": b}, checks)
