"""Foot placement laws: where to put the next step, as a linear function of velocity.

The 2D law picks the next foothold relative to the CoM as x_f = a + b*v.
The 3D law applies the same idea per leg along a commanded heading theta
(measured from the +y axis, positive toward +x): a longitudinal offset a_l,
a lateral offset a_w whose sign alternates between legs, and the shared
velocity gain b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError

__all__ = [
    "LegParams",
    "Gait3DParams",
    "FootPlacement",
    "lfpc_2d",
    "lfpc_3d",
    "heading_frame",
]


@dataclass(frozen=True)
class LegParams:
    """One leg's placement law: offset a (m) and velocity gain b (s).

    Neither field is sign-restricted; negative a walks the other way.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidParameterError(f"leg parameters must be finite, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class Gait3DParams:
    """3D gait knobs: step-length offset a_l (m), step-width offset a_w (m),
    heading theta (rad, from +y toward +x), velocity gain b (s), step period (s).

    One b and one period are shared by both horizontal axes.
    """

    a_l: float
    a_w: float
    theta: float
    b: float
    period: float

    def __post_init__(self) -> None:
        vals = (self.a_l, self.a_w, self.theta, self.b, self.period)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameterError(f"gait parameters must be finite, got {vals}")
        if not (self.period > 0.0):
            raise InvalidParameterError(f"step period must be positive, got {self.period}")


@dataclass(frozen=True)
class FootPlacement:
    """Next foothold relative to the CoM at touchdown: x_f (m), y_f (m, 0 in 2D)."""

    x_f: float
    y_f: float = 0.0


def lfpc_2d(v: float, leg: LegParams) -> FootPlacement:
    """Next foothold offset x_f = a + b*v for the touchdown velocity v."""
    return FootPlacement(leg.a + leg.b * v)


def heading_frame(theta: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Unit heading u and lateral w for a heading angle theta.

    u = (sin t, cos t) points along the walk direction; w = (cos t, -sin t) is
    u rotated a quarter turn toward leg 2's side.
    """
    return (math.sin(theta), math.cos(theta)), (math.cos(theta), -math.sin(theta))


def lfpc_3d(vx: float, vy: float, leg_id: int, gait: Gait3DParams) -> FootPlacement:
    """Per-leg 3D foothold offset for touchdown velocity (vx, vy).

    leg 1:  x_f = -a_l*sin(t) - a_w*cos(t) + b*vx
            y_f = -a_l*cos(t) + a_w*sin(t) + b*vy
    leg 2 flips the sign of the a_w terms. Equivalently the placement is
    -a_l*u + s*a_w*w + b*(vx, vy) with u, w from :func:`heading_frame` and
    s = -1 for leg 1, +1 for leg 2: leg 1 lands on the -a_w side of the path.
    """
    if leg_id not in (1, 2):
        raise InvalidParameterError(f"leg_id must be 1 or 2, got {leg_id}")
    sign = -1.0 if leg_id == 1 else 1.0
    sin_t = math.sin(gait.theta)
    cos_t = math.cos(gait.theta)
    x_f = -gait.a_l * sin_t + sign * gait.a_w * cos_t + gait.b * vx
    y_f = -gait.a_l * cos_t - sign * gait.a_w * sin_t + gait.b * vy
    return FootPlacement(x_f, y_f)
