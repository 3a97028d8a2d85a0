"""Purity-based EPR steering detection for bipartite quantum states."""

from .criteria import (
    Direction,
    SteeringReport,
    SteeringVerdict,
    full_report,
    lemma1_criterion,
    purity_criterion,
)
from .loo import build_loo, correlation_sum, marginal_sum
from .qmat import (
    DensityMatrix,
    InvalidDensityMatrix,
    ReducedState,
    Wing,
    kron,
    partial_trace,
    purity,
    validate,
)
from .scan import bell_diagonal_boundary, find_threshold, isotropic_curve, sweep
from .states import Family, FamilySpec

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "Direction",
    "Family",
    "FamilySpec",
    "InvalidDensityMatrix",
    "ReducedState",
    "SteeringReport",
    "SteeringVerdict",
    "Wing",
    "bell_diagonal_boundary",
    "build_loo",
    "correlation_sum",
    "find_threshold",
    "full_report",
    "isotropic_curve",
    "kron",
    "lemma1_criterion",
    "marginal_sum",
    "partial_trace",
    "purity",
    "purity_criterion",
    "sweep",
    "validate",
]
