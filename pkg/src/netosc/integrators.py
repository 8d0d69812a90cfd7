"""Fixed-step integrators and the trajectory container they produce."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteBlowup


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled states: row ``k`` of ``samples`` is at ``t0 + k*dt``."""

    t0: float
    dt: float
    samples: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.shape[0])


def step_count(dt: float, T: float) -> int:
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if not T >= dt:
        raise ValueError(f"T must be >= dt, got T={T!r}, dt={dt!r}")
    return int(round(T / dt))


def rk4_propagator(K: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step for ``y' = K y`` written as a single matrix.

    For a constant linear generator the four stages collapse to the
    degree-4 Taylor polynomial of ``exp(dt*K)``; applying it is the same
    update as evaluating k1..k4, up to rounding.
    """
    hK = dt * np.asarray(K)
    eye = np.eye(hK.shape[0], dtype=hK.dtype)
    hK2 = hK @ hK
    hK3 = hK2 @ hK
    return eye + hK + hK2 / 2 + hK3 / 6 + (hK3 @ hK) / 24


def rk4_linear(K, y0, dt: float, steps: int) -> np.ndarray:
    """RK4 samples of ``y' = K y``; returns an array of shape ``(steps + 1, dim)``."""
    R = rk4_propagator(K, dt)
    y = np.array(y0, dtype=np.result_type(R, np.asarray(y0)))
    out = np.empty((steps + 1, y.size), dtype=y.dtype)
    out[0] = y
    for k in range(1, steps + 1):
        y = R @ y
        if not np.isfinite(y).all():
            raise NonFiniteBlowup(k)
        out[k] = y
    return out


def velocity_verlet(L, x0, v0, dt: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Leapfrog in kick-drift-kick form for ``x'' = -L x``."""
    L = np.asarray(L, dtype=float)
    x = np.array(x0, dtype=float)
    v = np.array(v0, dtype=float)
    xs = np.empty((steps + 1, x.size))
    vs = np.empty((steps + 1, x.size))
    xs[0], vs[0] = x, v
    a = -L @ x
    half = 0.5 * dt
    for k in range(1, steps + 1):
        v_half = v + half * a
        x = x + dt * v_half
        a = -L @ x
        v = v_half + half * a
        if not (np.isfinite(x).all() and np.isfinite(v).all()):
            raise NonFiniteBlowup(k)
        xs[k], vs[k] = x, v
    return xs, vs
