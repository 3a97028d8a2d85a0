"""Finite-shot purity estimation from two-copy projections.

Projecting ``rho (x) rho`` onto the antisymmetric subspace succeeds with
probability ``q = (1 - tr(rho^2)) / 2``, so the observed antisymmetric
frequency gives an unbiased purity estimate ``1 - 2 q_hat``.  Sampling is
done at the outcome level (binomial with the exact ``q``); the explicit swap
operator is only built by :func:`antisymmetric_probability_swap`, which
cross-checks the shortcut for small dimensions.

The shot split (50/50 between joint and reduced purity) and the 3-sigma
one-sided decision rule are choices of this package.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _config
from .criteria import Direction
from .qmat import DensityMatrix, ReducedState, as_matrix, partial_trace, purity

__all__ = [
    "Target",
    "ShotRecord",
    "EstimatedVerdict",
    "antisymmetric_probability",
    "swap_operator",
    "antisymmetric_probability_swap",
    "sample_purity",
    "estimate_purity",
    "estimated_verdict",
]

DEFAULT_SIGMA = 3.0


class Target(enum.Enum):
    JOINT = "joint"
    REDUCED_A = "reduced-a"
    REDUCED_B = "reduced-b"


@dataclass(frozen=True)
class ShotRecord:
    target: Target
    shots: int
    antisymmetric_count: int
    seed: int | None

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if not 0 <= self.antisymmetric_count <= self.shots:
            raise ValueError("antisymmetric_count must lie in [0, shots]")


@dataclass(frozen=True)
class EstimatedVerdict:
    margin_estimate: float
    std_error: float
    z_score: float
    detected_at_3sigma: bool
    sigma: float = DEFAULT_SIGMA

    def to_dict(self) -> dict:
        return {
            "margin_estimate": float(f"{self.margin_estimate:.9g}"),
            "std_error": float(f"{self.std_error:.9g}"),
            "z_score": float(f"{self.z_score:.9g}"),
            "detected_3sigma": self.detected_at_3sigma,
        }


def _matrix_of(m) -> np.ndarray:
    if isinstance(m, (DensityMatrix, ReducedState)):
        return m.matrix
    return as_matrix(m)


def antisymmetric_probability(m, tol: float | None = None) -> float:
    """``(1 - tr(m^2)) / 2``, checked to lie in ``[0, 1/2]``."""
    tol = _config.TOLERANCE if tol is None else tol
    q = (1.0 - purity(_matrix_of(m))) / 2
    if q < -tol or q > 0.5 + tol:
        raise ValueError(f"antisymmetric probability {q:.3e} outside [0, 1/2]; not a valid state")
    return min(max(q, 0.0), 0.5)


def swap_operator(n: int) -> np.ndarray:
    """SWAP on ``C^n (x) C^n``: ``|i>|j> -> |j>|i>``."""
    s = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            s[j * n + i, i * n + j] = 1.0
    return s


def antisymmetric_probability_swap(m) -> float:
    """``tr(P_- (m (x) m))`` with ``P_- = (I - SWAP)/2`` built explicitly."""
    m = _matrix_of(m)
    n = m.shape[0]
    if n > 9:
        raise ValueError("explicit swap check limited to dimension <= 9")
    p_minus = (np.eye(n * n) - swap_operator(n)) / 2
    return float(np.trace(p_minus @ np.kron(m, m)).real)


def sample_purity(m, shots: int, seed=None, target: Target | str = Target.JOINT) -> ShotRecord:
    """Simulate ``shots`` two-copy projections on ``m``."""
    shots = int(shots)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    q = antisymmetric_probability(m)
    rng = np.random.default_rng(seed)
    count = int(rng.binomial(shots, q))
    return ShotRecord(Target(target), shots, count, seed if isinstance(seed, int) else None)


def estimate_purity(record: ShotRecord) -> tuple[float, float]:
    """Purity estimate and its binomial standard error.

    The empirical frequency is clamped to ``[1/(4N), 1 - 1/(4N)]`` for the
    error bar only, so the error stays positive when no (or every) shot
    lands in the antisymmetric subspace.
    """
    n = record.shots
    q_hat = record.antisymmetric_count / n
    est = 1.0 - 2.0 * q_hat
    qc = min(max(q_hat, 1 / (4 * n)), 1 - 1 / (4 * n))
    return est, 2.0 * math.sqrt(qc * (1 - qc) / n)


def estimated_verdict(rho: DensityMatrix, direction: Direction | str = Direction.A_TO_B,
                      shots: int = 10**6, seed=None,
                      sigma: float = DEFAULT_SIGMA) -> EstimatedVerdict:
    """Purity-criterion margin from ``shots`` simulated projections.

    Half the shots (rounded down) go to the joint state and the rest to the
    reduced state of the steered wing.
    """
    direction = Direction(direction)
    shots = int(shots)
    if shots < 2:
        raise ValueError("need at least 2 shots (one per purity)")
    red = partial_trace(rho, direction.steered.other)
    target = Target.REDUCED_B if direction is Direction.A_TO_B else Target.REDUCED_A
    s_joint, s_red = np.random.SeedSequence(seed).spawn(2)

    n_joint = shots // 2
    rec_j = sample_purity(rho.matrix, n_joint, np.random.default_rng(s_joint), Target.JOINT)
    rec_r = sample_purity(red.matrix, shots - n_joint, np.random.default_rng(s_red), target)
    pj, ej = estimate_purity(rec_j)
    pr, er = estimate_purity(rec_r)

    margin = pj - pr
    err = math.hypot(ej, er)
    z = margin / err
    return EstimatedVerdict(margin, err, z, z > sigma, sigma)
