"""Critical-parameter search and parameter sweeps.

Thresholds are located by bisection on the sign of the margin, after a
coarse pre-scan of the detection indicator ``margin(p) > tol`` that brackets
the crossing and rejects families with several crossings.  Closed-form thresholds are kept
out of this path on purpose: they serve as test oracles.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from . import _config
from .criteria import Direction, lemma1_criterion, purity_margin
from .states import PAULI, Family, FamilySpec, bell_diagonal_eigenvalues

__all__ = [
    "Reference",
    "REFERENCES",
    "lhs_isotropic_bound",
    "NoCrossingError",
    "MultipleCrossingsError",
    "ThresholdResult",
    "find_threshold",
    "RegionGrid",
    "bell_diagonal_boundary",
    "tetrahedron_valid",
    "IsotropicRow",
    "isotropic_curve",
    "SweepRow",
    "sweep",
    "write_sweep_csv",
    "write_region_csv",
    "write_isotropic_csv",
]


@dataclass(frozen=True)
class Reference:
    """A reported comparison value, stored as data rather than recomputed."""

    label: str
    value: float
    source: str


_LHS = "Wiseman-Jones-Doherty local-hidden-state bound"
_REPORTED = "reported purity-criterion value"

REFERENCES: dict[Family, tuple[Reference, ...]] = {
    Family.WERNER: (
        Reference("purity criterion", 1 / math.sqrt(3), _REPORTED),
        Reference("steerable iff", 0.5, _LHS),
        Reference("entangled iff", 1 / 3, "Werner separability bound"),
    ),
    Family.ASYMMETRIC: (
        # Direction labels are not reported for these pairs.
        Reference("purity criterion (one way)", 0.572, _REPORTED),
        Reference("purity criterion (other way)", 0.645, _REPORTED),
        Reference("LUR criterion (one way)", 0.536, "local uncertainty relation criterion"),
        Reference("LUR criterion (other way)", 0.582, "local uncertainty relation criterion"),
        Reference("entropic criterion (one way)", 0.639, "entropic uncertainty relation, 3 MUBs"),
        Reference("entropic criterion (other way)", 0.604, "entropic uncertainty relation, 3 MUBs"),
        Reference("CHSH-like inequality (both ways)", 0.748, "CHSH-like steering inequality"),
    ),
    Family.FREE_ENTANGLED: (
        Reference("purity criterion", 0.5, _REPORTED),
    ),
}


def lhs_isotropic_bound(d: int) -> float:
    """``(H_d - 1)/(d - 1)``: isotropic states are steerable iff ``p`` exceeds this."""
    harmonic = math.fsum(1 / m for m in range(1, d + 1))
    return (harmonic - 1) / (d - 1)


def _references(spec: FamilySpec) -> tuple[Reference, ...]:
    if spec.family is Family.ISOTROPIC:
        d = spec.d
        return (
            Reference("purity criterion", 1 / math.sqrt(d + 1), _REPORTED),
            Reference("steerable iff", lhs_isotropic_bound(d), _LHS),
            Reference("entangled iff", 1 / (d + 1), "isotropic separability bound"),
        )
    return REFERENCES.get(spec.family, ())


class NoCrossingError(ValueError):
    """The detection indicator never changes over the search interval."""


class MultipleCrossingsError(ValueError):
    """The detection indicator changes more than once over the interval."""


@dataclass(frozen=True)
class ThresholdResult:
    """Critical mixing parameter for one family and direction.

    ``status`` is ``"crossing"`` when a threshold was found, otherwise
    ``"never-detected"`` or ``"always-detected"`` and ``critical_p`` is None.
    """

    family: FamilySpec
    direction: Direction | None
    critical_p: float | None
    bracket: tuple[float, float] | None
    status: str = "crossing"
    increasing: bool = True
    criterion: str = "purity"
    references: tuple[Reference, ...] = field(default=(), compare=False)


MarginFn = Callable[[float], float]


def _margin_fn(spec: FamilySpec, direction: Direction | None, criterion: str) -> MarginFn:
    if spec.family is Family.BELL_DIAGONAL:
        raise ValueError("the Bell-diagonal family has no mixing parameter; use bell_diagonal_boundary")
    if criterion == "purity":
        if direction is None:
            raise ValueError("purity criterion needs a direction")
        return lambda p: purity_margin(spec.with_p(p).build(), direction)
    if criterion == "lemma1":
        if spec.dims != (2, 2):
            raise ValueError(f"Pauli correlation test needs a 2x2 family, got {spec.label()}")
        return lambda p: lemma1_criterion(spec.with_p(p).build()).margin
    raise ValueError(f"unknown criterion {criterion!r}")


def find_threshold(
    spec: FamilySpec,
    direction: Direction | str | None = Direction.A_TO_B,
    p_lo: float = 0.0,
    p_hi: float = 1.0,
    *,
    criterion: str = "purity",
    prescan: int = 101,
    xtol: float = 1e-12,
    tol: float | None = None,
    strict: bool = True,
) -> ThresholdResult:
    """Bisect for the mixing parameter where detection switches on.

    Parameters
    ----------
    spec : FamilySpec
        Family template; its own ``p`` is ignored.
    direction : Direction or str
        Steering direction for the purity criterion; ignored for ``lemma1``.
    prescan : int
        Number of grid points used to bracket the crossing.
    strict : bool
        If False, a missing crossing is returned as a result with
        ``critical_p=None`` instead of raising.

    Raises
    ------
    NoCrossingError
        When ``strict`` and detection never switches over ``[p_lo, p_hi]``.
    MultipleCrossingsError
        When the pre-scan sees more than one switch.
    """
    direction = Direction(direction) if direction is not None else None
    if criterion == "lemma1":
        direction = None
    if not 0.0 <= p_lo < p_hi <= 1.0:
        raise ValueError(f"need 0 <= p_lo < p_hi <= 1, got [{p_lo}, {p_hi}]")
    tol = _config.TOLERANCE if tol is None else tol
    margin = _margin_fn(spec, direction, criterion)
    refs = _references(spec)

    grid = np.linspace(p_lo, p_hi, prescan)
    flags = np.array([margin(p) > tol for p in grid])
    switches = np.flatnonzero(flags[1:] != flags[:-1])
    if len(switches) == 0:
        status = "always-detected" if flags[0] else "never-detected"
        if strict:
            raise NoCrossingError(f"{spec.label()} {direction}: {status} on [{p_lo}, {p_hi}]")
        return ThresholdResult(spec, direction, None, None, status, criterion=criterion, references=refs)
    if len(switches) > 1:
        raise MultipleCrossingsError(
            f"{spec.label()} {direction}: {len(switches)} crossings near p = "
            + ", ".join(f"{grid[k]:.3g}" for k in switches)
        )

    k = switches[0]
    increasing = not flags[k]
    lo, hi = float(grid[k]), float(grid[k + 1])
    # The bracket comes from the tolerance-aware indicator; inside it the
    # zero of the margin itself is located.
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if (margin(mid) > 0.0) == increasing:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(spec, direction, 0.5 * (lo + hi), (lo, hi), "crossing",
                           increasing, criterion, refs)


# -- Bell-diagonal region ------------------------------------------------------


@dataclass(frozen=True)
class RegionGrid:
    """Margins over a ``(c1, c2)`` grid at fixed ``c3``.

    Cells are stored flat in row-major order (``c1`` slow, ``c2`` fast).
    Non-physical cells are kept and flagged through ``psd_valid``.
    """

    c3: float
    axis: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    margin_a_to_b: np.ndarray
    margin_b_to_a: np.ndarray
    psd_valid: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.axis), len(self.axis))

    @property
    def radius(self) -> float:
        """Radius of the detection circle ``c1^2 + c2^2 = 1 - c3^2``."""
        return math.sqrt(max(0.0, 1.0 - self.c3**2))

    @property
    def step(self) -> float:
        return float(self.axis[1] - self.axis[0]) if len(self.axis) > 1 else 0.0

    def detected(self, tol: float | None = None) -> np.ndarray:
        tol = _config.TOLERANCE if tol is None else tol
        return self.margin_a_to_b > tol

    def rows(self) -> Iterable[tuple[float, float, float, float, bool]]:
        for i in range(len(self.c1)):
            yield (float(self.c1[i]), float(self.c2[i]), self.c3,
                   float(self.margin_a_to_b[i]), bool(self.psd_valid[i]))


def bell_diagonal_boundary(c3: float, grid_n: int = 401, tol: float | None = None) -> RegionGrid:
    """Purity-criterion margins for Bell-diagonal states on a ``grid_n**2`` grid.

    The margin is evaluated on the explicitly constructed matrices and
    checked against ``(c1^2 + c2^2 + c3^2 - 1)/4``; any mismatch above
    1e-12 raises ``RuntimeError``.
    """
    if abs(c3) > 1:
        raise ValueError(f"|c3| must be <= 1, got {c3}")
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    tol = _config.TOLERANCE if tol is None else tol
    axis = np.linspace(-1.0, 1.0, grid_n)
    c1, c2 = (a.ravel() for a in np.meshgrid(axis, axis, indexing="ij"))

    ops = [np.kron(s, s) for s in PAULI]
    mats = (np.eye(4) + c1[:, None, None] * ops[0] + c2[:, None, None] * ops[1]
            + c3 * ops[2]) / 4
    joint = np.sum(np.abs(mats) ** 2, axis=(1, 2))
    t = mats.reshape(-1, 2, 2, 2, 2)
    rho_b = np.einsum("najak->njk", t)
    rho_a = np.einsum("najbj->nab", t)
    m_ab = joint - np.sum(np.abs(rho_b) ** 2, axis=(1, 2))
    m_ba = joint - np.sum(np.abs(rho_a) ** 2, axis=(1, 2))

    closed = (c1**2 + c2**2 + c3**2 - 1) / 4
    err = max(np.max(np.abs(m_ab - closed)), np.max(np.abs(m_ba - closed)))
    if err > _config.IDENTITY_TOLERANCE:
        raise RuntimeError(f"Bell-diagonal margin deviates from closed form by {err:.3e}")

    evals = np.linalg.eigvalsh(mats)
    psd = evals[:, 0] >= -tol
    return RegionGrid(float(c3), axis, c1, c2, m_ab, m_ba, psd)


def tetrahedron_valid(c1, c2, c3, tol: float | None = None) -> np.ndarray:
    """Physicality of Bell-diagonal triples from the closed-form spectrum."""
    tol = _config.TOLERANCE if tol is None else tol
    ev = bell_diagonal_eigenvalues(np.asarray(c1), np.asarray(c2), np.asarray(c3))
    return np.all(ev >= -tol, axis=0)


# -- isotropic table -----------------------------------------------------------


@dataclass(frozen=True)
class IsotropicRow:
    d: int
    threshold_purity: float
    threshold_analytic: float
    threshold_theory: float
    annotation_source: str


def isotropic_curve(d_values: Sequence[int], check_tol: float = 1e-6) -> list[IsotropicRow]:
    """Bisected purity-criterion thresholds for isotropic states of each ``d``.

    Each value is checked against ``1/sqrt(d + 1)`` to ``check_tol``.
    """
    rows = []
    for d in d_values:
        if d < 2:
            raise ValueError(f"d must be >= 2, got {d}")
        res = find_threshold(FamilySpec(Family.ISOTROPIC, d=d), Direction.A_TO_B)
        analytic = 1 / math.sqrt(d + 1)
        if abs(res.critical_p - analytic) > check_tol:
            raise RuntimeError(f"d={d}: bisection gave {res.critical_p}, expected {analytic}")
        rows.append(IsotropicRow(d, res.critical_p, analytic, lhs_isotropic_bound(d), _LHS))
    return rows


# -- sweeps ----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    p: float
    margin_a_to_b: float
    margin_b_to_a: float


def sweep(spec: FamilySpec, p_grid: Iterable[float]) -> list[SweepRow]:
    """Purity-criterion margins in both directions along ``p_grid``."""
    if spec.family is Family.BELL_DIAGONAL:
        raise ValueError("the Bell-diagonal family has no mixing parameter")
    out = []
    for p in p_grid:
        rho = spec.with_p(p).build()
        out.append(SweepRow(float(p), purity_margin(rho, Direction.A_TO_B),
                            purity_margin(rho, Direction.B_TO_A)))
    return out


def _g(x: float) -> str:
    return f"{x:.9g}"


def write_sweep_csv(rows: Iterable[SweepRow], fp: TextIO) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["p", "margin_a_to_b", "margin_b_to_a"])
    for r in rows:
        w.writerow([_g(r.p), _g(r.margin_a_to_b), _g(r.margin_b_to_a)])


def write_region_csv(grid: RegionGrid, fp: TextIO) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["c1", "c2", "c3", "margin", "psd_valid"])
    for c1, c2, c3, m, ok in grid.rows():
        w.writerow([_g(c1), _g(c2), _g(c3), _g(m), "true" if ok else "false"])


def write_isotropic_csv(rows: Iterable[IsotropicRow], fp: TextIO) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["d", "threshold_purity", "threshold_theory", "annotation_source"])
    for r in rows:
        w.writerow([r.d, _g(r.threshold_purity), _g(r.threshold_theory), r.annotation_source])
