"""Independent numerical oracles used by the test suite.

These deliberately avoid the package's closed-form code paths: a batched
fixed-step RK4 integrator for the pendulum ODE and a central-difference
Jacobian, so the analytic results are checked against something that cannot
share their bugs.
"""

from __future__ import annotations

import numpy as np

from lipwalk import LegParams, ModelParams, PendulumState, StepConstants, poincare_map


def rk4_pendulum_batch(
    x0: np.ndarray, v0: np.ndarray, t: np.ndarray, model: ModelParams, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate x'' = (g/h)x for each (x0[i], v0[i]) up to t[i] with fixed step dt.

    Full steps of dt run in lockstep across the batch (frozen once a case's
    budget is spent), then each case takes one shortened tail step to land
    exactly on its t.
    """
    k = model.g / model.h
    x = np.array(x0, dtype=float)
    v = np.array(v0, dtype=float)
    n_full = np.floor(t / dt).astype(int)
    tails = t - n_full * dt

    def step(x, v, h):
        k1x, k1v = v, k * x
        k2x = v + 0.5 * h * k1v
        k2v = k * (x + 0.5 * h * k1x)
        k3x = v + 0.5 * h * k2v
        k3v = k * (x + 0.5 * h * k2x)
        k4x = v + h * k3v
        k4v = k * (x + h * k3x)
        return (
            x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )

    for i in range(int(n_full.max(initial=0))):
        active = i < n_full
        nx, nv = step(x, v, dt)
        x = np.where(active, nx, x)
        v = np.where(active, nv, v)
    has_tail = tails > 0.0
    nx, nv = step(x, v, np.where(has_tail, tails, dt))
    x = np.where(has_tail, nx, x)
    v = np.where(has_tail, nv, v)
    return x, v


def fd_return_map_jacobian(
    q: PendulumState,
    leg: LegParams,
    consts: StepConstants,
    model: ModelParams,
    h: float = 1e-6,
) -> np.ndarray:
    """Central-difference Jacobian of the step-to-step map at the state q."""
    def f(x: float, v: float) -> np.ndarray:
        out = poincare_map(PendulumState(x, v), leg, consts, model)
        return np.array([out.x, out.v])

    col_x = (f(q.x + h, q.v) - f(q.x - h, q.v)) / (2.0 * h)
    col_v = (f(q.x, q.v + h) - f(q.x, q.v - h)) / (2.0 * h)
    return np.column_stack([col_x, col_v])
