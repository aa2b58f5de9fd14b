"""Step-to-step analysis of linear foot placement control.

Everything here lives on the touchdown-to-touchdown (Poincare) map of the
LIP with the placement law x_f = a + b*v and a fixed step period T:

    x1 = -a - b*(x0*s_T/T_c + v0*c_T)
    v1 =       x0*s_T/T_c + v0*c_T

The map is affine with a state-independent Jacobian whose eigenvalues are
0 and lambda2 = c_T - b*s_T/T_c, so one number decides stability. The
module provides that eigenvalue, the stable interval of b, the named
special gains, regime classification, periodic-gait solvers, and a dense
(T, b) scan for plotting the stability region.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .control import FootPlacement, LegParams
from .errors import DegeneratePeriodError, InvalidParameterError, NoIsolatedFixedPointError
from .model import ModelParams, PendulumState, StepConstants, step_constants

__all__ = [
    "Regime",
    "SpecialGains",
    "StabilityReport",
    "FixedPointSolution",
    "ReturnMapJacobian",
    "RegionScan",
    "poincare_map",
    "touchdown_state",
    "apply_transition",
    "return_map_jacobian",
    "eigenvalue_lambda2",
    "balance_bounds",
    "special_b",
    "classify_regime",
    "regime_of_lambda",
    "stability_report",
    "period1_fixed_point",
    "period2_fixed_point",
    "inplace_step_length",
    "region_scan",
]

# Equality tolerance on lambda2 for regime boundaries; strict inequality elsewhere.
REGIME_BOUNDARY_TOL = 1e-9

# Degenerate-denominator guard for the periodic-gait solvers.
FIXED_POINT_DENOM_TOL = 1e-12


class Regime(Enum):
    """Step-to-step behavior classes, ordered by decreasing lambda2 (increasing b)."""

    DIVERGENT_LOW = "divergent_low"    # lambda2 > 1: b below the stable interval
    NEUTRAL_LOWER = "neutral_lower"    # lambda2 = 1: velocity preserved each step
    OVERDAMPED = "overdamped"          # 0 < lambda2 < 1: monotone decay
    DEADBEAT = "deadbeat"              # lambda2 = 0: converged after one placement
    UNDERDAMPED = "underdamped"        # -1 < lambda2 < 0: decay with sign alternation
    NEUTRAL_UPPER = "neutral_upper"    # lambda2 = -1: mirrored each step
    DIVERGENT_HIGH = "divergent_high"  # lambda2 < -1: b above the stable interval


@dataclass(frozen=True)
class SpecialGains:
    """The four named values of the velocity gain b (all in seconds)."""

    b_min: float
    b_cp: float
    b_db: float
    b_max: float


@dataclass(frozen=True)
class StabilityReport:
    """Stable-interval bounds plus, when a gain b was queried, its eigenvalue and regime."""

    b_min: float
    b_max: float
    b_db: float
    b_cp: float
    lambda2: float | None = None
    regime: Regime | None = None


@dataclass(frozen=True)
class FixedPointSolution:
    """Touchdown state of a periodic gait and its per-cycle step lengths.

    step_lengths holds one value for a period-1 gait, two for period-2.
    """

    x0: float
    v0: float
    step_lengths: tuple[float, ...]
    period_count: int


@dataclass(frozen=True)
class ReturnMapJacobian:
    """Entries of the 2x2 step-to-step Jacobian (state-independent)."""

    dx_dx: float
    dx_dv: float
    dv_dx: float
    dv_dv: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.dx_dx, self.dx_dv], [self.dv_dx, self.dv_dv]])

    def det(self) -> float:
        return self.dx_dx * self.dv_dv - self.dx_dv * self.dv_dx

    def trace(self) -> float:
        return self.dx_dx + self.dv_dv


def touchdown_state(q0: PendulumState, consts: StepConstants, model: ModelParams) -> PendulumState:
    """State just before the swing foot lands, i.e. the flow evaluated at the step period."""
    x = q0.x * consts.c_t + (model.t_c * q0.v) * consts.s_t
    v = (q0.x / model.t_c) * consts.s_t + q0.v * consts.c_t
    return PendulumState(x, v)


def apply_transition(q_minus: PendulumState, placement: FootPlacement) -> PendulumState:
    """Support exchange: velocity is continuous, position re-references to the new foot."""
    return PendulumState(-placement.x_f, q_minus.v)


def poincare_map(
    q: PendulumState, leg: LegParams, consts: StepConstants, model: ModelParams
) -> PendulumState:
    """One full step: coast for T, place the foot at a + b*v, swap support."""
    v_td = (q.x / model.t_c) * consts.s_t + q.v * consts.c_t
    return PendulumState(-leg.a - leg.b * v_td, v_td)


def return_map_jacobian(
    leg: LegParams, consts: StepConstants, model: ModelParams
) -> ReturnMapJacobian:
    """Analytic Jacobian of the step-to-step map; independent of the state."""
    s_over_tc = consts.s_t / model.t_c
    return ReturnMapJacobian(
        dx_dx=-leg.b * s_over_tc,
        dx_dv=-leg.b * consts.c_t,
        dv_dx=s_over_tc,
        dv_dv=consts.c_t,
    )


def eigenvalue_lambda2(leg: LegParams, consts: StepConstants, model: ModelParams) -> float:
    """The single nontrivial eigenvalue of the step-to-step map (the other is 0)."""
    return consts.c_t - leg.b * consts.s_t / model.t_c


def _require_positive_period(consts: StepConstants) -> None:
    if consts.period == 0.0 or consts.s_t == 0.0:
        raise DegeneratePeriodError("step period is zero; step-to-step quantities undefined")


def balance_bounds(consts: StepConstants, model: ModelParams) -> tuple[float, float]:
    """Open interval (b_min, b_max) of velocity gains with |lambda2| < 1."""
    _require_positive_period(consts)
    b_min = model.t_c * (consts.c_t - 1.0) / consts.s_t
    b_max = model.t_c * (consts.c_t + 1.0) / consts.s_t
    return b_min, b_max


def special_b(consts: StepConstants, model: ModelParams) -> SpecialGains:
    """The named gains: stability bounds, dead-beat, and capture point.

    b_db = T_c*c_T/s_T zeroes lambda2 (one controlled step reaches steady
    state); b_cp = T_c is the one stabilizing gain independent of T.
    """
    b_min, b_max = balance_bounds(consts, model)
    return SpecialGains(
        b_min=b_min,
        b_cp=model.t_c,
        b_db=model.t_c * consts.c_t / consts.s_t,
        b_max=b_max,
    )


def regime_of_lambda(lam: float) -> Regime:
    """Classify a step-to-step eigenvalue by sign and magnitude.

    Boundary equality (lambda in {-1, 0, 1}) is decided within
    REGIME_BOUNDARY_TOL; the open intervals are strict.
    """
    if abs(lam - 1.0) <= REGIME_BOUNDARY_TOL:
        return Regime.NEUTRAL_LOWER
    if abs(lam + 1.0) <= REGIME_BOUNDARY_TOL:
        return Regime.NEUTRAL_UPPER
    if abs(lam) <= REGIME_BOUNDARY_TOL:
        return Regime.DEADBEAT
    if lam > 1.0:
        return Regime.DIVERGENT_LOW
    if lam > 0.0:
        return Regime.OVERDAMPED
    if lam > -1.0:
        return Regime.UNDERDAMPED
    return Regime.DIVERGENT_HIGH


def classify_regime(b: float, consts: StepConstants, model: ModelParams) -> Regime:
    """Classify the gain b by the eigenvalue it produces at this step period."""
    _require_positive_period(consts)
    return regime_of_lambda(eigenvalue_lambda2(LegParams(0.0, b), consts, model))


def stability_report(
    consts: StepConstants, model: ModelParams, b: float | None = None
) -> StabilityReport:
    """Bundle the special gains with the eigenvalue/regime of an optional queried b."""
    gains = special_b(consts, model)
    lam = None
    regime = None
    if b is not None:
        lam = eigenvalue_lambda2(LegParams(0.0, b), consts, model)
        regime = classify_regime(b, consts, model)
    return StabilityReport(
        b_min=gains.b_min,
        b_max=gains.b_max,
        b_db=gains.b_db,
        b_cp=gains.b_cp,
        lambda2=lam,
        regime=regime,
    )


def period1_fixed_point(
    leg: LegParams, consts: StepConstants, model: ModelParams
) -> FixedPointSolution:
    """Touchdown state that repeats every step when both legs share (a, b).

    x0 = a*T_c*(c_T - 1) / (T_c - T_c*c_T + b*s_T)
    v0 = -a*s_T          / (T_c - T_c*c_T + b*s_T)
    d  = -2*x0

    The denominator vanishes at b = b_min, where no isolated fixed point exists.
    """
    _require_positive_period(consts)
    gains = special_b(consts, model)
    if abs(leg.b - gains.b_min) <= FIXED_POINT_DENOM_TOL:
        raise NoIsolatedFixedPointError(
            f"b = {leg.b} sits on the lower stability bound b_min = {gains.b_min}"
        )
    denom = model.t_c - model.t_c * consts.c_t + leg.b * consts.s_t
    x0 = leg.a * model.t_c * (consts.c_t - 1.0) / denom
    v0 = -leg.a * consts.s_t / denom
    return FixedPointSolution(x0=x0, v0=v0, step_lengths=(-2.0 * x0,), period_count=1)


def period2_fixed_point(
    leg1: LegParams, leg2: LegParams, consts: StepConstants, model: ModelParams
) -> FixedPointSolution:
    """Touchdown state that repeats every two steps when the legs differ.

    The closed-form solution of the two-step composition; the step lengths
    are recovered from the pre-touchdown positions, d_i = x_i^- - x_i, which
    equals the displacement between consecutive footholds.
    """
    _require_positive_period(consts)
    tc, s, c = model.t_c, consts.s_t, consts.c_t
    a1, b1, a2, b2 = leg1.a, leg1.b, leg2.a, leg2.b
    denom = tc * tc - tc * tc * c * c + tc * b1 * c * s + tc * b2 * c * s - b1 * b2 * s * s
    if abs(denom) <= FIXED_POINT_DENOM_TOL:
        raise NoIsolatedFixedPointError(
            f"degenerate two-step denominator for b1={b1}, b2={b2} at period {consts.period}"
        )
    x0 = -tc * (tc * a2 - a1 * b2 * s - tc * a2 * c * c + a2 * b1 * c * s) / denom
    v0 = -(tc * a1 * s + tc * a2 * c * s - a2 * b1 * s * s) / denom
    q0 = PendulumState(x0, v0)
    q1 = poincare_map(q0, leg1, consts, model)
    q2 = poincare_map(q1, leg2, consts, model)
    x1_minus = q0.x * c + tc * q0.v * s
    x2_minus = q1.x * c + tc * q1.v * s
    d1 = x1_minus - q1.x
    d2 = x2_minus - q2.x
    return FixedPointSolution(x0=x0, v0=v0, step_lengths=(d1, d2), period_count=2)


def inplace_step_length(
    a: float, b: float, consts: StepConstants, model: ModelParams
) -> tuple[float, float]:
    """Step-length pair of the mirrored gait (a, -a): d1 = -d2, net progress zero.

    d1 = 2*T_c*a*(c_T + 1) / (T_c + T_c*c_T - b*s_T); the denominator vanishes
    at b = b_max.
    """
    _require_positive_period(consts)
    gains = special_b(consts, model)
    if abs(b - gains.b_max) <= FIXED_POINT_DENOM_TOL:
        raise NoIsolatedFixedPointError(
            f"b = {b} sits on the upper stability bound b_max = {gains.b_max}"
        )
    d1 = 2.0 * model.t_c * a * (consts.c_t + 1.0) / (model.t_c + model.t_c * consts.c_t - b * consts.s_t)
    return d1, -d1


@dataclass(frozen=True)
class RegionScan:
    """Dense stability map over a (T, b) rectangle, row-major by T then b.

    lambda2[i, j] and regimes[i][j] correspond to (t_values[i], b_values[j]);
    curves maps each special-gain name to its values sampled along t_values.
    """

    t_values: np.ndarray
    b_values: np.ndarray
    lambda2: np.ndarray
    regimes: list[list[Regime]]
    curves: dict[str, np.ndarray]


def region_scan(
    t_range: tuple[float, float],
    b_range: tuple[float, float],
    grid: tuple[int, int],
    model: ModelParams,
) -> RegionScan:
    """Evaluate lambda2 and its regime on a (T, b) grid, plus the special-gain curves."""
    t_lo, t_hi = t_range
    b_lo, b_hi = b_range
    n_t, n_b = grid
    if not (0.0 < t_lo <= t_hi):
        raise InvalidParameterError(f"period range must satisfy 0 < t_lo <= t_hi, got {t_range}")
    if not (b_lo <= b_hi):
        raise InvalidParameterError(f"gain range must satisfy b_lo <= b_hi, got {b_range}")
    if n_t < 1 or n_b < 1:
        raise InvalidParameterError(f"grid resolution must be >= 1, got {grid}")

    t_values = np.linspace(t_lo, t_hi, n_t)
    b_values = np.linspace(b_lo, b_hi, n_b)
    lam = np.empty((n_t, n_b))
    regimes: list[list[Regime]] = []
    curves: dict[str, list[float]] = {"b_min": [], "b_cp": [], "b_db": [], "b_max": []}
    for i, t in enumerate(t_values):
        consts = step_constants(float(t), model)
        gains = special_b(consts, model)
        curves["b_min"].append(gains.b_min)
        curves["b_cp"].append(gains.b_cp)
        curves["b_db"].append(gains.b_db)
        curves["b_max"].append(gains.b_max)
        row: list[Regime] = []
        for j, b in enumerate(b_values):
            lam[i, j] = eigenvalue_lambda2(LegParams(0.0, float(b)), consts, model)
            row.append(classify_regime(float(b), consts, model))
        regimes.append(row)
    return RegionScan(
        t_values=t_values,
        b_values=b_values,
        lambda2=lam,
        regimes=regimes,
        curves={k: np.array(v) for k, v in curves.items()},
    )
