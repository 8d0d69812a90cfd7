"""Wave equation and first-order fundamental equation on a graph.

The second-order flow ``x'' = -L x`` is integrated with velocity Verlet;
the doubled first-order flow ``i dxhat/dt = Op xhat`` with classical RK4.
``project_state`` and ``lift_initial_condition`` translate between them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graph as gc
from .algebra import EvolutionOperator, representation
from .errors import DimensionMismatch, KernelVelocity, NotSymmetric, TooFewSamples
from .integrators import Trajectory, rk4_linear, step_count, velocity_verlet

KERNEL_TOL = 1e-9


@dataclass(frozen=True)
class WaveState:
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if x.shape != v.shape or x.ndim != 1:
            raise DimensionMismatch(f"x {x.shape} and v {v.shape} must be equal-length vectors")
        if not (np.isfinite(x).all() and np.isfinite(v).all()):
            raise ValueError("wave state has non-finite entries")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)


def integrate_wave(L, init: WaveState, dt: float = 1e-3, T: float = 10.0) -> Trajectory:
    """Samples are rows ``(x_0..x_{n-1}, v_0..v_{n-1})``."""
    L = np.asarray(L, dtype=float)
    if L.shape != (init.x.size, init.x.size):
        raise DimensionMismatch(f"L has shape {L.shape}, state has length {init.x.size}")
    steps = step_count(dt, T)
    xs, vs = velocity_verlet(L, init.x, init.v, dt, steps)
    return Trajectory(0.0, dt, np.hstack([xs, vs]),
                      {"kind": "wave", "integrator": "velocity-verlet", "n": init.x.size})


def wave_positions(traj: Trajectory) -> np.ndarray:
    n = traj.samples.shape[1] // 2
    return traj.samples[:, :n]


def wave_states(traj: Trajectory):
    n = traj.samples.shape[1] // 2
    for row in traj.samples:
        yield WaveState(row[:n], row[n:])


def integrate_fundamental(op: EvolutionOperator, init, dt: float = 1e-3,
                          T: float = 10.0) -> Trajectory:
    init = np.asarray(init, dtype=complex)
    if init.shape != (2 * op.n,):
        raise DimensionMismatch(f"doubled state must have length {2 * op.n}, got {init.shape}")
    steps = step_count(dt, T)
    samples = rk4_linear(-1j * op.matrix, init, dt, steps)
    return Trajectory(0.0, dt, samples,
                      {"kind": "doubled", "integrator": "rk4", "n": op.n,
                       "representation": op.rep.tag})


def project_state(xhat) -> tuple[np.ndarray, float]:
    """Contract each node's spinor pair with ``(1, 1)``.

    Returns the real part and the largest discarded imaginary component.
    """
    xhat = np.asarray(xhat)
    if xhat.shape[-1] % 2:
        raise DimensionMismatch(f"doubled state length {xhat.shape[-1]} is odd")
    x = xhat[..., 0::2] + xhat[..., 1::2]
    residue = float(np.max(np.abs(np.imag(x)))) if x.size else 0.0
    return np.real(x).copy(), residue


def projected_trajectory(traj: Trajectory) -> tuple[Trajectory, float]:
    x, residue = project_state(traj.samples)
    meta = dict(traj.metadata, kind="projected")
    return Trajectory(traj.t0, traj.dt, x, meta), residue


def _kernel_component(H: np.ndarray, v0: np.ndarray) -> float:
    # size of v0 outside range(H), i.e. along the null space of H^T
    U, s, _ = np.linalg.svd(H)
    cutoff = max(H.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    null = U[:, s <= cutoff] if s.size else U
    return float(np.linalg.norm(null.T @ v0)) if null.size else 0.0


def lift_initial_condition(x0, v0, g: gc.Graph, rep) -> np.ndarray:
    """Doubled state whose projection is ``x0`` with projected velocity ``v0``."""
    rep = representation(rep)
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if x0.shape != (g.n,) or v0.shape != (g.n,):
        raise DimensionMismatch(f"x0 {x0.shape} and v0 {v0.shape} must have length {g.n}")
    sqrt_d = np.sqrt(np.diag(gc.degree_matrix(g)))
    if rep.tag == "A":
        if np.any(sqrt_d == 0):
            raise gc.ZeroDegreeNode("lift needs positive out-degrees")
        # (1,1) a = 0 and (1,1) b = (1,-1): only sqrt(D) drives the projected velocity
        u = 1j * v0 / sqrt_d
    else:
        H = gc.semi_normalized_laplacian(g)
        leak = _kernel_component(H, v0)
        if leak > KERNEL_TOL:
            raise KernelVelocity(
                f"v0 has a component {leak:.3e} outside the range of H; "
                "representation B cannot realize it")
        u = 1j * (np.linalg.pinv(H) @ v0)
    xhat = np.empty(2 * g.n, dtype=complex)
    xhat[0::2] = 0.5 * (x0 + u)
    xhat[1::2] = 0.5 * (x0 - u)
    return xhat


@dataclass(frozen=True)
class ConsistencyReport:
    max_residual: float
    tol: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def to_dict(self):
        return {"max_residual": self.max_residual, "tol": self.tol,
                "samples": self.samples, "passed": self.passed}


def verify_wave_consistency(traj: Trajectory, L, tol: float = 1e-3) -> ConsistencyReport:
    """Centered second differences of projected ``x(t)`` against ``-L x``."""
    x = np.real(traj.samples)
    if x.shape[0] < 3:
        raise TooFewSamples(f"need at least 3 samples, got {x.shape[0]}")
    acc = (x[2:] - 2 * x[1:-1] + x[:-2]) / traj.dt**2
    residual = acc + x[1:-1] @ np.asarray(L, dtype=float).T
    return ConsistencyReport(float(np.max(np.abs(residual))), float(tol), x.shape[0])


def wave_energy(state: WaveState, L) -> float:
    L = np.asarray(L, dtype=float)
    if np.max(np.abs(L - L.T)) > gc.SYMMETRY_TOL:
        raise NotSymmetric("wave energy is defined for symmetric Laplacians only")
    return float(0.5 * state.v @ state.v + 0.5 * state.x @ L @ state.x)


def energy_series(traj: Trajectory, L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if np.max(np.abs(L - L.T)) > gc.SYMMETRY_TOL:
        raise NotSymmetric("wave energy is defined for symmetric Laplacians only")
    n = traj.samples.shape[1] // 2
    x, v = traj.samples[:, :n], traj.samples[:, n:]
    return 0.5 * np.einsum("ki,ki->k", v, v) + 0.5 * np.einsum("ki,ij,kj->k", x, L, x)


def relative_energy_drift(traj: Trajectory, L) -> float:
    E = energy_series(traj, L)
    scale = abs(E[0]) if E[0] != 0 else 1.0
    return float(np.max(np.abs(E - E[0])) / scale)
