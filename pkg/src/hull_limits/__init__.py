"""Almost-sure limits of normalized convex hulls of Gaussian sequences, by simulation."""

__version__ = "0.1.0"

from .errors import DomainError, ParameterError
from .experiments import (
    ConvergenceCurve,
    ExperimentConfig,
    levy_check,
    lemma1_probe,
    rate_probe,
    run_convergence,
)
from .geometry import (
    DirectionGrid,
    Ellipsoid,
    Hull2D,
    Interval,
    Polytope,
    SupportProfile,
    area2d,
    diameter2d,
    ellipsoid_support,
    hausdorff_intervals,
    hausdorff_profiles,
    make_direction_grid,
    profile_of_points,
)
from .normalizers import Normalizer, eval_b, eval_c, eval_g
from .sequences import SequenceSpec, check_condition2, rho, spawn
from .tracker import HullSnapshot, TrackerState, distance_to_target, snapshot

__all__ = [
    "ConvergenceCurve", "DirectionGrid", "DomainError", "Ellipsoid", "ExperimentConfig", "Hull2D",
    "HullSnapshot", "Interval", "Normalizer", "ParameterError", "Polytope", "SequenceSpec",
    "SupportProfile", "TrackerState", "area2d", "check_condition2", "diameter2d", "distance_to_target",
    "ellipsoid_support", "eval_b", "eval_c", "eval_g", "hausdorff_intervals", "hausdorff_profiles",
    "levy_check", "lemma1_probe", "make_direction_grid", "profile_of_points", "rate_probe", "rho",
    "run_convergence", "snapshot", "spawn",
]
