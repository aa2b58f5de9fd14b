"""Linear foot placement control on the linear inverted pendulum.

Closed-form step dynamics, touchdown-to-touchdown stability analysis,
periodic gait solvers, 2D/3D walking simulation with pushes and turns,
and a live steering session served over a JSON line protocol.
"""

from .analysis import (
    FixedPointSolution,
    Regime,
    RegionScan,
    ReturnMapJacobian,
    SpecialGains,
    StabilityReport,
    apply_transition,
    balance_bounds,
    classify_regime,
    eigenvalue_lambda2,
    inplace_step_length,
    period1_fixed_point,
    period2_fixed_point,
    poincare_map,
    region_scan,
    return_map_jacobian,
    special_b,
    stability_report,
    touchdown_state,
)
from .control import FootPlacement, Gait3DParams, LegParams, lfpc_2d, lfpc_3d
from .errors import (
    DegeneratePeriodError,
    InvalidParameterError,
    LipwalkError,
    NoIsolatedFixedPointError,
)
from .model import (
    ModelParams,
    PendulumState,
    StepConstants,
    flow,
    flow_numeric,
    orbital_energy,
    step_constants,
    time_constant,
)
from .simulate import (
    GaitMeasure,
    PushEvent,
    StepRecord,
    WalkTrace,
    WorldState,
    measure_gait,
    simulate_2d,
    simulate_3d,
)

__version__ = "0.1.0"
