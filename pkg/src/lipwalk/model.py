"""Continuous-phase dynamics of the linear inverted pendulum (LIP).

A point mass rides at constant height h on a massless leg; its horizontal
motion relative to the stance foot obeys

    x_dd = (g/h) * x

which has the closed-form solution implemented by :func:`flow`. A fixed-step
RK4 integrator (:func:`flow_numeric`) is kept alongside as an independent
cross-check, and :func:`orbital_energy` gives the conserved quantity of the
flow. All units are SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidParameterError

__all__ = [
    "ModelParams",
    "PendulumState",
    "StepConstants",
    "time_constant",
    "step_constants",
    "flow",
    "flow_numeric",
    "orbital_energy",
]


def time_constant(g: float, h: float) -> float:
    """Pendulum time constant T_c = sqrt(h/g) in seconds."""
    if not (g > 0.0) or not (h > 0.0):
        raise InvalidParameterError(f"g and h must be positive, got g={g}, h={h}")
    return math.sqrt(h / g)


@dataclass(frozen=True)
class ModelParams:
    """Gravity g (m/s^2), CoM height h (m), and the derived time constant t_c (s)."""

    g: float
    h: float
    t_c: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_c", time_constant(self.g, self.h))


@dataclass(frozen=True)
class PendulumState:
    """CoM position x (m) and velocity v (m/s) relative to the stance foot, one axis."""

    x: float
    v: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.v)):
            raise InvalidParameterError(f"state must be finite, got ({self.x}, {self.v})")


@dataclass(frozen=True)
class StepConstants:
    """sinh and cosh of T/T_c for a step period T, precomputed once per gait."""

    s_t: float
    c_t: float
    period: float


def step_constants(t: float, model: ModelParams) -> StepConstants:
    """Hyperbolic step constants s_T = sinh(T/T_c), c_T = cosh(T/T_c)."""
    if t < 0.0:
        raise InvalidParameterError(f"step period must be >= 0, got {t}")
    tau = t / model.t_c
    return StepConstants(s_t=math.sinh(tau), c_t=math.cosh(tau), period=t)


def flow(state: PendulumState, t: float, model: ModelParams) -> PendulumState:
    """Closed-form LIP state after coasting for time t on the current stance foot.

    x(t) = x0*cosh(t/T_c) + T_c*v0*sinh(t/T_c)
    v(t) = (x0/T_c)*sinh(t/T_c) + v0*cosh(t/T_c)
    """
    if t < 0.0:
        raise InvalidParameterError(f"flow time must be >= 0, got {t}")
    tau = t / model.t_c
    c = math.cosh(tau)
    s = math.sinh(tau)
    x = state.x * c + (model.t_c * state.v) * s
    v = (state.x / model.t_c) * s + state.v * c
    return PendulumState(x, v)


def flow_numeric(state: PendulumState, t: float, model: ModelParams, dt: float) -> PendulumState:
    """Fixed-step RK4 integration of x_dd = (g/h)*x, for cross-validating :func:`flow`.

    Deliberately simple and deterministic: constant step dt, with the last
    partial step shortened so the integration lands exactly on t.
    """
    if t < 0.0:
        raise InvalidParameterError(f"integration time must be >= 0, got {t}")
    if t > 0.0 and not (dt > 0.0):
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    k = model.g / model.h
    x, v = state.x, state.v

    def rk4_step(x: float, v: float, step: float) -> tuple[float, float]:
        # k1..k4 for the system (x' = v, v' = k*x)
        k1x, k1v = v, k * x
        k2x = v + 0.5 * step * k1v
        k2v = k * (x + 0.5 * step * k1x)
        k3x = v + 0.5 * step * k2v
        k3v = k * (x + 0.5 * step * k2x)
        k4x = v + step * k3v
        k4v = k * (x + step * k3x)
        return (
            x + (step / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            v + (step / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )

    if t == 0.0:
        return PendulumState(x, v)
    n_full = int(math.floor(t / dt))
    for _ in range(n_full):
        x, v = rk4_step(x, v, dt)
    tail = t - n_full * dt
    if tail > 0.0:
        x, v = rk4_step(x, v, tail)
    return PendulumState(x, v)


def orbital_energy(state: PendulumState, model: ModelParams) -> float:
    """Conserved quantity v^2 - (g/h)*x^2 of the LIP flow (used as a test invariant)."""
    return state.v * state.v - (model.g / model.h) * state.x * state.x
