"""Inverse-optimal and adaptive parking control for the unicycle in polar coordinates."""

from .clf import LieDerivatives, alpha1, alpha2, clf_value, lie_derivatives
from .control import (
    AdaptiveState,
    ControllerConfig,
    Saturation,
    adaptive_bound,
    adaptive_feedback,
    adaptive_update,
    continuous_feedback,
    epsilon_schedule,
    optimal_feedback,
)
from .model import (
    CartesianPose,
    ControlInput,
    PolarState,
    SlipParams,
    cartesian_dynamics,
    from_polar,
    polar_dynamics,
    slip_dynamics,
    to_polar,
)
from .penalty import (
    BUILTIN_NAMES,
    HyperbolicCosine,
    LogCosine,
    PenaltyFunction,
    Quadratic,
    RelayApprox,
    builtin_penalty,
    inv_eta_prime,
    lf_transform,
)
from .sim import (
    BoundCheck,
    CostResult,
    ProbeEntry,
    SimParams,
    SimulationDiverged,
    Trajectory,
    TrajectorySample,
    check_adaptive_bound,
    classical_quadratic_cost,
    evaluate_cost,
    integrate,
    integrate_adaptive,
    optimality_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveState", "BoundCheck", "BUILTIN_NAMES", "CartesianPose", "ControlInput",
    "ControllerConfig", "CostResult", "HyperbolicCosine", "LieDerivatives", "LogCosine",
    "PenaltyFunction", "PolarState", "ProbeEntry", "Quadratic", "RelayApprox",
    "Saturation", "SimParams", "SimulationDiverged", "SlipParams", "Trajectory",
    "TrajectorySample", "adaptive_bound", "adaptive_feedback", "adaptive_update",
    "alpha1", "alpha2", "builtin_penalty", "cartesian_dynamics", "check_adaptive_bound",
    "classical_quadratic_cost", "clf_value", "continuous_feedback", "epsilon_schedule",
    "evaluate_cost",
    "from_polar", "integrate", "integrate_adaptive", "inv_eta_prime", "lf_transform",
    "lie_derivatives", "optimal_feedback", "optimality_probe", "polar_dynamics",
    "slip_dynamics", "to_polar",
]
