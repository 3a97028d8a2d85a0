"""Steering verdicts.

The purity criterion: a state that cannot be steered from A to B satisfies
``tr(rho_AB^2) <= tr(rho_B^2)``, so a positive margin
``tr(rho_AB^2) - tr(rho_B^2)`` certifies A-to-B steering (and therefore
entanglement).  Swapping the roles of the wings gives the B-to-A test.

For two qubits there is also the Pauli correlation bound
``sum_ij <sigma_i (x) sigma_j>^2 <= 1``.

Both tests are sufficient, not necessary: ``detected=False`` means the
criterion is silent, never that the state is unsteerable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _config
from .qmat import DensityMatrix, Wing, partial_trace, purity
from .states import PAULI

__all__ = [
    "Direction",
    "Criterion",
    "SteeringVerdict",
    "SteeringReport",
    "purity_margin",
    "purity_criterion",
    "pauli_correlation_sum",
    "lemma1_criterion",
    "full_report",
]


class Direction(enum.Enum):
    A_TO_B = "a-to-b"
    B_TO_A = "b-to-a"

    @property
    def steered(self) -> Wing:
        """Wing whose reduced purity enters the bound."""
        return Wing.B if self is Direction.A_TO_B else Wing.A


class Criterion(enum.Enum):
    PURITY = "purity"
    LEMMA1 = "lemma1"


@dataclass(frozen=True)
class SteeringVerdict:
    """Outcome of one criterion.

    ``direction`` is ``None`` for the two-qubit correlation test, which does
    not distinguish directions.
    """

    direction: Direction | None
    detected: bool
    margin: float
    criterion: Criterion
    tolerance: float

    @property
    def boundary(self) -> bool:
        return abs(self.margin) <= self.tolerance

    @property
    def status(self) -> str:
        if self.detected:
            return "detected"
        return "boundary" if self.boundary else "not-detected"

    def to_dict(self, digits: int | None = 9) -> dict:
        return {"detected": self.detected, "margin": _round(self.margin, digits)}


def _round(x: float, digits: int | None) -> float:
    return float(x) if digits is None else float(f"{x:.{digits}g}")


def _decide(margin: float, tol: float | None) -> tuple[bool, float]:
    tol = _config.TOLERANCE if tol is None else float(tol)
    return margin > tol, tol


def purity_margin(rho: DensityMatrix, direction: Direction | str = Direction.A_TO_B) -> float:
    """``tr(rho_AB^2) - tr(rho_X^2)`` with X the steered wing."""
    direction = Direction(direction)
    red = partial_trace(rho, direction.steered.other)
    return purity(rho.matrix) - purity(red.matrix)


def purity_criterion(rho: DensityMatrix, direction: Direction | str = Direction.A_TO_B,
                     tol: float | None = None) -> SteeringVerdict:
    """Purity test of steerability in ``direction``.

    Examples
    --------
    >>> from steerpurity.states import werner
    >>> v = purity_criterion(werner(0.8), "a-to-b")
    >>> v.detected, round(v.margin, 12)
    (True, 0.23)
    """
    direction = Direction(direction)
    margin = purity_margin(rho, direction)
    detected, tol = _decide(margin, tol)
    return SteeringVerdict(direction, detected, margin, Criterion.PURITY, tol)


def pauli_correlation_sum(rho: DensityMatrix) -> float:
    """``sum_{i,j=1..3} <sigma_i (x) sigma_j>^2`` for a two-qubit state."""
    if rho.dims != (2, 2):
        raise ValueError(f"Pauli correlation test needs a 2x2 system, got {rho.dim_a}x{rho.dim_b}")
    t = np.array([[np.einsum("ij,ji->", rho.matrix, np.kron(si, sj)).real
                   for sj in PAULI] for si in PAULI])
    return float(np.sum(t * t))


def lemma1_criterion(rho: DensityMatrix, tol: float | None = None) -> SteeringVerdict:
    """Two-qubit Pauli correlation test; margin is ``S - 1``."""
    margin = pauli_correlation_sum(rho) - 1.0
    detected, tol = _decide(margin, tol)
    return SteeringVerdict(None, detected, margin, Criterion.LEMMA1, tol)


@dataclass(frozen=True)
class SteeringReport:
    a_to_b: SteeringVerdict
    b_to_a: SteeringVerdict
    lemma1: SteeringVerdict | None
    purity_joint: float
    purity_a: float
    purity_b: float

    @property
    def entanglement_certified(self) -> bool:
        # Every steerable state is entangled.
        return any(v.detected for v in (self.a_to_b, self.b_to_a, self.lemma1) if v is not None)

    def to_dict(self, digits: int | None = 9) -> dict:
        return {
            "a_to_b": self.a_to_b.to_dict(digits),
            "b_to_a": self.b_to_a.to_dict(digits),
            "lemma1": self.lemma1.to_dict(digits) if self.lemma1 is not None else None,
            "purities": {
                "joint": _round(self.purity_joint, digits),
                "a": _round(self.purity_a, digits),
                "b": _round(self.purity_b, digits),
            },
            "entanglement_certified": self.entanglement_certified,
        }

    def render_text(self) -> str:
        lines = [
            f"purity  joint={self.purity_joint:.9g}  A={self.purity_a:.9g}  B={self.purity_b:.9g}",
            f"A->B    {self.a_to_b.status:<13} margin={self.a_to_b.margin:+.9g}",
            f"B->A    {self.b_to_a.status:<13} margin={self.b_to_a.margin:+.9g}",
        ]
        if self.lemma1 is not None:
            lines.append(f"pauli   {self.lemma1.status:<13} margin={self.lemma1.margin:+.9g}")
        lines.append(f"entanglement certified: {'yes' if self.entanglement_certified else 'no'}")
        return "\n".join(lines)


def full_report(rho: DensityMatrix, tol: float | None = None) -> SteeringReport:
    """Both purity directions, the Pauli test when 2x2, and all purities."""
    return SteeringReport(
        a_to_b=purity_criterion(rho, Direction.A_TO_B, tol),
        b_to_a=purity_criterion(rho, Direction.B_TO_A, tol),
        lemma1=lemma1_criterion(rho, tol) if rho.dims == (2, 2) else None,
        purity_joint=purity(rho.matrix),
        purity_a=purity(partial_trace(rho, Wing.B).matrix),
        purity_b=purity(partial_trace(rho, Wing.A).matrix),
    )
